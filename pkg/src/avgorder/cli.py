"""Command-line front end: ``avgorder {density,constant,sweep,table8,selfcheck}``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass

import mpmath

from .arith import is_prime
from .constants import format_fixed, log_integral, universal_constant
from .density import DensityEngine
from .errors import AvgOrderError, ConfigError, LimitTooLarge, NotPrimeGenerators, PrecisionUnreachable
from .subgroup import SubgroupPresentation, subgroup
from .sweep import MAX_LIMIT, Checkpoint, SweepLedger, sweep
from .twoadic import INF

DEFAULTS = {
    "generators": "2",
    "t": 1,
    "method": "all",
    "digits": None,
    "series_limit": 100_000,
    "limit": 1_000_000,
    "checkpoints": "pow10",
    "workers": 1,
    "output": "text",
    "output_path": None,
    "r": 1,
    "max_rank": 7,
}
INT_KEYS = {"t", "digits", "series_limit", "limit", "workers", "r", "max_rank"}


@dataclass
class RunConfig:
    generators: str
    t: int
    method: str
    digits: int
    series_limit: int
    limit: int
    checkpoints: str
    workers: int
    output: str
    output_path: str | None
    r: int
    max_rank: int

    def validate(self) -> None:
        if self.t < 1:
            raise ConfigError("--t must be a positive integer")
        if self.digits < 1:
            raise ConfigError("--digits must be positive")
        if self.digits > 60:
            raise PrecisionUnreachable(f"{self.digits} digits requested; at most 60 are supported")
        if self.limit > MAX_LIMIT:
            raise LimitTooLarge(f"--limit exceeds the cap {MAX_LIMIT}")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        if self.method not in ("euler", "series", "cor3", "all"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.output not in ("text", "json", "csv"):
            raise ConfigError(f"unknown output format {self.output!r}")

    def header(self) -> str:
        fields = ", ".join(f"{k}={v}" for k, v in asdict(self).items() if v is not None)
        return f"# config: {fields}"


def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (x.strip() for x in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in DEFAULTS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                out[key] = value
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return out


def resolve_config(args: argparse.Namespace, default_digits: int) -> RunConfig:
    merged = dict(DEFAULTS)
    merged["digits"] = default_digits
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    for key in INT_KEYS:
        try:
            merged[key] = int(merged[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{key} must be an integer, got {merged[key]!r}") from exc
    cfg = RunConfig(**merged)
    cfg.validate()
    return cfg


def parse_checkpoints(spec: str, limit: int) -> list[int] | None:
    if spec == "pow10":
        return None
    try:
        marks = sorted({int(float(x)) for x in spec.split(",") if x.strip()})
    except ValueError as exc:
        raise ConfigError(f"bad checkpoint list {spec!r}") from exc
    return [x for x in marks if x <= limit] + ([limit] if limit not in marks else [])


def dec(x, places: int = 12) -> str:
    return format_fixed(x, places)


# -- density ----------------------------------------------------------------


def density_report(pres: SubgroupPresentation, cfg: RunConfig) -> dict:
    eng = DensityEngine(pres)
    t, digits = cfg.t, cfg.digits
    methods = ["euler", "series", "cor3"] if cfg.method == "all" else [cfg.method]
    prime_gens = all(len(g.exponents) == 1 and next(iter(g.exponents.values())) == 1 for g in pres.generators)
    if "cor3" in methods and (t != 1 or not prime_gens):
        if cfg.method == "cor3":
            raise NotPrimeGenerators("the closed form needs t = 1 and distinct prime generators")
        methods.remove("cor3")
    values = {}
    estimates = {}
    q = eng.rational_multiplier(t)
    for m in methods:
        if m == "euler":
            res = eng.density_euler(t, max(digits, 20))
        elif m == "cor3":
            res = eng.density_prime_generators(max(digits, 20))
        else:
            res = eng.density_series(t, cfg.series_limit)
        values[m] = res.value
        estimates[m] = res.error_estimate
    etas = []
    for d in eng.eta_descriptors():
        etas.append(
            {
                "eta": d.eta,
                "delta": d.discriminant,
                "t_eta": "inf" if d.depth == INF else d.depth,
                "gamma_eta": "inf" if d.cutoff == INF else d.cutoff,
                "S_eta": str(eng.s_eta(d, t)),
            }
        )
    deltas = {}
    names = list(values)
    with mpmath.workdps(max(digits, 20) + 10):
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                deltas[f"{a}-{b}"] = values[a] - values[b]
    return {
        "group": pres.describe(),
        "rank": pres.rank,
        "support": list(pres.support),
        "deltas": list(pres.deltas),
        "t": t,
        "q": q,
        "values": values,
        "error_estimates": estimates,
        "etas": etas,
        "differences": deltas,
        "extension": t > 1,
    }


def render_density(rep: dict, cfg: RunConfig) -> str:
    if cfg.output == "json":
        payload = {
            "group": rep["group"],
            "rank": str(rep["rank"]),
            "t": str(rep["t"]),
            "support": [str(p) for p in rep["support"]],
            "deltas": [str(d) for d in rep["deltas"]],
            "q": str(rep["q"]),
            "values": {m: truncate(v, cfg.digits) for m, v in rep["values"].items()},
            "error_estimates": {m: mpmath.nstr(v, 5) for m, v in rep["error_estimates"].items()},
            "differences": {k: mpmath.nstr(v, 5) for k, v in rep["differences"].items()},
            "etas": [{k: str(v) for k, v in e.items()} for e in rep["etas"]],
        }
        return json.dumps(payload, indent=2)
    lines = [cfg.header(), f"group {rep['group']}  rank {rep['rank']}  support {rep['support']}"]
    lines.append("Delta_0..Delta_r = " + ", ".join(str(d) for d in rep["deltas"]))
    if rep["extension"]:
        lines.append("note: t > 1 uses the rational-multiplier factorization beyond the t = 1 case")
    lines.append(f"q = {rep['q']}")
    lines.append(f"{'eta':>10} {'delta':>10} {'t_eta':>6} {'gamma':>6}  S_eta")
    for e in rep["etas"]:
        lines.append(f"{e['eta']:>10} {e['delta']:>10} {e['t_eta']!s:>6} {e['gamma_eta']!s:>6}  {e['S_eta']}")
    for m, v in rep["values"].items():
        lines.append(f"C[{m}] = {truncate(v, cfg.digits)}")
        if m == "series":
            lines.append(f"  tail estimate {mpmath.nstr(rep['error_estimates'][m], 3)}")
    for k, v in rep["differences"].items():
        lines.append(f"diff {k} = {mpmath.nstr(v, 3)}")
    return "\n".join(lines)


def truncate(x, places: int) -> str:
    """Decimal expansion cut (not rounded) after ``places`` digits."""
    with mpmath.workdps(places + 20):
        scaled = int(mpmath.floor(mpmath.mpf(x) * mpmath.mpf(10) ** places))
    digits = str(scaled).rjust(places + 1, "0")
    return f"{digits[:-places]}.{digits[-places:]}"


# -- sweep ------------------------------------------------------------------


def checkpoint_row(c: Checkpoint, t: int, cval) -> dict:
    with mpmath.workdps(30):
        a = mpmath.mpf(c.sum_orders_t) / c.sum_p_t
        li = log_integral(mpmath.mpf(c.x) ** (t + 1)) if c.x > 2 else None
        li_ratio = mpmath.mpf(c.sum_orders_t) / li if li else None
    return {
        "X": str(c.x),
        "prime_count": str(c.prime_count),
        "sum_orders_t": str(c.sum_orders_t),
        "sum_p_t": str(c.sum_p_t),
        "A": dec(a),
        "C": dec(cval),
        "diff": dec(abs(a - cval)),
        "li_ratio": dec(li_ratio) if li_ratio is not None else "",
    }


class CsvCheckpointWriter:
    """Appends ``X,prime_count,sum_orders_t,sum_p_t`` rows, flushing each one."""

    FIELDS = ["X", "prime_count", "sum_orders_t", "sum_p_t"]

    def __init__(self, stream):
        self.stream = stream
        self.writer = csv.writer(stream)

    @classmethod
    def open(cls, path: str):
        fresh = not os.path.exists(path) or os.path.getsize(path) == 0
        stream = open(path, "a", newline="")
        self = cls(stream)
        if fresh:
            self.writer.writerow(cls.FIELDS)
            stream.flush()
        return self

    def __call__(self, c: Checkpoint) -> None:
        self.writer.writerow([c.x, c.prime_count, c.sum_orders_t, c.sum_p_t])
        self.stream.flush()


def read_checkpoint_csv(path: str) -> list[Checkpoint]:
    with open(path, newline="") as fh:
        return [Checkpoint(int(r["X"]), int(r["prime_count"]), int(r["sum_orders_t"]), int(r["sum_p_t"])) for r in csv.DictReader(fh)]


def run_sweep(pres: SubgroupPresentation, cfg: RunConfig, on_checkpoint=None) -> tuple[SweepLedger, dict]:
    marks = parse_checkpoints(cfg.checkpoints, cfg.limit)
    ledger = sweep(pres, cfg.t, cfg.limit, marks, cfg.workers, on_checkpoint=on_checkpoint)
    cval = DensityEngine(pres).density_euler(cfg.t, 30).value
    rows = [checkpoint_row(c, cfg.t, cval) for c in ledger.checkpoints]
    final = rows[-1] if rows else {"A": "0", "diff": ""}
    report = {"limit": str(cfg.limit), "A": final["A"], "C": dec(cval), "diff": final["diff"], "checkpoints": rows}
    return ledger, report


def render_sweep(report: dict, cfg: RunConfig, pres: SubgroupPresentation) -> str:
    if cfg.output == "json":
        return json.dumps(report, indent=2)
    lines = [cfg.header(), f"group {pres.describe()}  t = {cfg.t}"]
    lines.append(f"{'X':>12} {'pi(X)':>10} {'A':>16} {'C':>16} {'|A-C|':>16} {'sum/li':>16}")
    for r in report["checkpoints"]:
        lines.append(f"{r['X']:>12} {r['prime_count']:>10} {r['A']:>16} {r['C']:>16} {r['diff']:>16} {r['li_ratio']:>16}")
    return "\n".join(lines)


# -- table8 -----------------------------------------------------------------


def table8_groups(max_rank: int = 7) -> dict[str, list[list[int]]]:
    """First r primes; first r odd primes; first r primes = 1 mod 4."""
    primes, p = [], 2
    while sum(1 for q in primes if q % 4 == 1) < max_rank:
        if is_prime(p):
            primes.append(p)
        p += 1
    odd = [q for q in primes if q > 2]
    one_mod_4 = [q for q in primes if q % 4 == 1]
    return {
        "Gamma": [primes[:r] for r in range(1, max_rank + 1)],
        "Gamma'": [odd[:r] for r in range(1, max_rank + 1)],
        "Gamma''": [one_mod_4[:r] for r in range(1, max_rank + 1)],
    }


def table8_report(cfg: RunConfig) -> dict:
    out = {}
    for family, groups in table8_groups(cfg.max_rank).items():
        crow, arow = [], []
        for gens in groups:
            pres = subgroup(gens)
            c = DensityEngine(pres).density_euler(1, max(cfg.digits, 20)).value
            crow.append(truncate(c, cfg.digits))
            if cfg.limit > 0:
                ledger = sweep(pres, 1, cfg.limit, [cfg.limit], cfg.workers)
                arow.append(truncate(mpmath.mpf(ledger.sum_orders_t) / ledger.sum_p_t, cfg.digits))
        out[family] = {"C": crow, "A": arow if cfg.limit > 0 else None}
    return out


def render_table8(rep: dict, cfg: RunConfig) -> str:
    if cfg.output == "json":
        return json.dumps({"limit": str(cfg.limit), "rows": rep}, indent=2)
    width = cfg.digits + 3
    lines = [cfg.header(), "r".rjust(10) + "".join(str(r).rjust(width) for r in range(1, cfg.max_rank + 1))]
    for family, rows in rep.items():
        if rows["A"] is not None:
            lines.append(f"A_{family}".rjust(10) + "".join(v.rjust(width) for v in rows["A"]))
        lines.append(f"C_{family}".rjust(10) + "".join(v.rjust(width) for v in rows["C"]))
    return "\n".join(lines)


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="avgorder", description="Average multiplicative order densities for subgroups of Q+.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, gens=True):
        p.add_argument("--config", help="file of 'key = value' lines (flags take precedence)")
        p.add_argument("--output", choices=["text", "json", "csv"], default=None)
        p.add_argument("--digits", type=int, default=None)
        if gens:
            p.add_argument("--generators", help="comma-separated list, e.g. 2,3,5 or 3/2,5")
            p.add_argument("--t", type=int, default=None, help="moment (positive integer)")

    p = sub.add_parser("density", help="compute C_{Gamma,t}")
    common(p)
    p.add_argument("--method", choices=["euler", "series", "cor3", "all"], default=None)
    p.add_argument("--series-limit", dest="series_limit", type=int, default=None)

    p = sub.add_parser("constant", help="universal constant C_{r,t}")
    common(p, gens=False)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--t", type=int, default=None)

    p = sub.add_parser("sweep", help="empirical sum of |Gamma_p|^t over p <= X")
    common(p)
    p.add_argument("--limit", type=lambda s: int(float(s)), default=None)
    p.add_argument("--checkpoints", default=None, help="'pow10' or a comma-separated list")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output-path", dest="output_path", default=None, help="CSV checkpoint file (appended)")

    p = sub.add_parser("table8", help="the three families of prime-generated groups, r = 1..7")
    common(p, gens=False)
    p.add_argument("--limit", type=lambda s: int(float(s)), default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--max-rank", dest="max_rank", type=int, default=None)

    sub.add_parser("selfcheck", help="run the oracle-equivalence suites")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except AvgOrderError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "selfcheck":
        from .selfcheck import run_selfcheck

        results = run_selfcheck()
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
        return 0 if all(r.passed for r in results) else 1

    if args.command == "constant":
        cfg = resolve_config(args, 38)
        value = universal_constant(cfg.r, cfg.t, cfg.digits)
        text = format_fixed(value, cfg.digits)
        if cfg.output == "json":
            print(json.dumps({"r": str(cfg.r), "t": str(cfg.t), "digits": str(cfg.digits), "value": text}))
        else:
            print(text)
        return 0

    if args.command == "table8":
        cfg = resolve_config(args, 10)
        if getattr(args, "limit", None) is None and "limit" not in (read_config_file(args.config) if args.config else {}):
            cfg.limit = 0
        print(render_table8(table8_report(cfg), cfg))
        return 0

    if args.command == "density":
        cfg = resolve_config(args, 10)
        pres = subgroup(cfg.generators)
        print(render_density(density_report(pres, cfg), cfg))
        return 0

    if args.command == "sweep":
        cfg = resolve_config(args, 10)
        pres = subgroup(cfg.generators)
        if cfg.output == "csv":
            writer = CsvCheckpointWriter.open(cfg.output_path) if cfg.output_path else CsvCheckpointWriter(sys.stdout)
            if not cfg.output_path:
                writer.writer.writerow(CsvCheckpointWriter.FIELDS)
            try:
                run_sweep(pres, cfg, on_checkpoint=writer)
            finally:
                if cfg.output_path:
                    writer.stream.close()
            return 0
        _, report = run_sweep(pres, cfg)
        print(render_sweep(report, cfg, pres))
        return 0
    raise ConfigError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
