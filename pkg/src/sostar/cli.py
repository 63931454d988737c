"""Command-line front end: ``sostar verify|scan|density|dims|orbit``.

Every flag can also be set through an environment variable named
``SOSTAR_<FLAG>`` (for example ``SOSTAR_SCOPE=exhaustive``); explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .geodesics import trajectory_svg, trajectory_tsv
from .origami import horizontal_cylinders, make_staircase, orbit, vertex_structure
from .verifier import (
    CONVENTION_FINGERPRINT,
    METHODS,
    SCOPES,
    ConditionData,
    OutOfFamily,
    Verdict,
    admissible,
    check_in_D,
    density_profile,
    dimension_report,
    verify,
)

EXIT_CODES = {"CERTIFIED": 0, "EXCLUDED_NOT_IN_D": 2, "CONDITION_FAILED": 3, "ERROR": 1}
EX_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


@dataclass(frozen=True)
class RunConfig:
    command: str
    d: int | None = None
    lo: int | None = None
    hi: int | None = None
    n: int | None = None
    scope: str = "proof-min"
    method: str = "chain"
    jobs: int = 1
    fmt: str = "text"
    cache_dir: str | None = None
    dump_matrices: str | None = None
    dump_trajectories: str | None = None
    prime_seed: int = 0

    def __post_init__(self):
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise UsageError("--from must not exceed --to")


def _env(name: str, default=None, cast=str):
    raw = os.environ.get(f"SOSTAR_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"bad value for SOSTAR_{name}: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--scope", choices=SCOPES, default=None)
    common.add_argument("--method", choices=METHODS, default=None, help="pairing route: chain transport or geometric crossings")
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default=None)
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--dump-matrices", metavar="DIR", default=None)
    common.add_argument("--dump-trajectories", metavar="DIR", default=None)
    common.add_argument("--prime-seed", type=int, default=None)

    p = _Parser(prog="sostar", description="Certify twist conditions for quaternionic staircase covers.")
    p.add_argument("--version", action="version", version=f"sostar {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", parents=[common], help="certify one d")
    v.add_argument("--d", type=int, default=None)
    s = sub.add_parser("scan", parents=[common], help="certify every admissible d in a range")
    s.add_argument("--from", dest="lo", type=int, default=None)
    s.add_argument("--to", dest="hi", type=int, default=None)
    de = sub.add_parser("density", parents=[common], help="binomial sieve counts up to n")
    de.add_argument("--n", type=int, default=None)
    di = sub.add_parser("dims", parents=[common], help="dimension comparison for one d")
    di.add_argument("--d", type=int, default=None)
    o = sub.add_parser("orbit", parents=[common], help="T/S orbit of the d-square staircase")
    o.add_argument("--d", type=int, default=None)
    return p


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    get = lambda attr, env, default, cast=str: (  # noqa: E731
        getattr(ns, attr) if getattr(ns, attr, None) is not None else _env(env, default, cast)
    )
    cfg = RunConfig(
        command=ns.command,
        d=get("d", "D", None, int),
        lo=get("lo", "FROM", None, int),
        hi=get("hi", "TO", None, int),
        n=get("n", "N", None, int),
        scope=get("scope", "SCOPE", "proof-min"),
        method=get("method", "METHOD", "chain"),
        jobs=get("jobs", "JOBS", 1, int),
        fmt=get("fmt", "FORMAT", "text"),
        cache_dir=get("cache_dir", "CACHE_DIR", None),
        dump_matrices=get("dump_matrices", "DUMP_MATRICES", None),
        dump_trajectories=get("dump_trajectories", "DUMP_TRAJECTORIES", None),
        prime_seed=get("prime_seed", "PRIME_SEED", 0, int),
    )
    if cfg.scope not in SCOPES or cfg.method not in METHODS or cfg.fmt not in ("text", "json", "csv"):
        raise UsageError("bad scope, method or format")
    return cfg


# ---------------------------------------------------------------------------
# cache


def cache_path(cfg: RunConfig, d: int) -> Path | None:
    if not cfg.cache_dir:
        return None
    name = f"verdict-d{d}-{cfg.scope}-{cfg.method}-seed{cfg.prime_seed}-v{__version__}-{CONVENTION_FINGERPRINT}.json"
    return Path(cfg.cache_dir) / name


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_cached(cfg: RunConfig, d: int) -> Verdict | None:
    path = cache_path(cfg, d)
    if path is None or not path.exists():
        return None
    try:
        return Verdict.from_dict(json.loads(path.read_text()))
    except (ValueError, TypeError, KeyError):
        return None


def _store(cfg: RunConfig, v: Verdict) -> None:
    path = cache_path(cfg, v.d)
    if path is not None and v.conclusion != "ERROR":
        _atomic_write(path, v.to_json() + "\n")


# ---------------------------------------------------------------------------
# dumps


def _grid(a: np.ndarray) -> str:
    return "\n".join(" ".join(str(int(x)) for x in row) for row in a) + "\n"


def dump_matrices(directory: str, d: int, data: ConditionData) -> None:
    out = Path(directory)
    _atomic_write(out / f"N_d{d}.txt", _grid(data.N))
    parts = []
    for (r, s), B in sorted(data.blocks.items()):
        parts.append(f"# P[{r},{s}]\n{_grid(B)}")
    _atomic_write(out / f"P_d{d}.txt", "".join(parts))


def dump_trajectories(directory: str, d: int, data: ConditionData) -> None:
    out = Path(directory)
    for r, (model, fam) in sorted(data.kept_models.items()):
        for g, t in enumerate(fam.cores):
            stem = f"core_d{d}_r{r}_g{g}"
            _atomic_write(out / f"{stem}.tsv", trajectory_tsv(t))
            _atomic_write(out / f"{stem}.svg", trajectory_svg(t, columns=d))


# ---------------------------------------------------------------------------
# verify / scan


def _run_one(cfg: RunConfig, d: int) -> Verdict:
    cached = _load_cached(cfg, d)
    if cached is not None and not (cfg.dump_matrices or cfg.dump_trajectories):
        return cached
    keep = (0, 1) if cfg.dump_trajectories else ()
    v, data = verify(d, cfg.scope, cfg.method, cfg.prime_seed, keep_models=keep)
    if data is not None:
        if cfg.dump_matrices:
            dump_matrices(cfg.dump_matrices, d, data)
        if cfg.dump_trajectories:
            dump_trajectories(cfg.dump_trajectories, d, data)
    _store(cfg, v)
    return v


def _verdict_text(v: Verdict) -> str:
    lines = [f"d = {v.d}: {v.conclusion}"]
    if v.in_D:
        lines.append("  in D: yes")
    else:
        p, r = v.witness
        lines.append(f"  in D: no, 2*{v.d} = C({p + 1}, {r})")
    for k, c in v.conditions().items():
        lines.append(f"  {k}: {c.status:7s} {c.detail}")
    lines.append(f"  scope {v.scope}, pairing {v.method}, tool {v.tool_version}, conventions {v.conventions}")
    if v.conclusion == "CERTIFIED":
        lines.append("  conditions c1-c5 certified and d lies in D: SO*(2d) follows from the criterion")
    return "\n".join(lines)


def _emit(cfg: RunConfig, verdicts: list[Verdict], out=None) -> None:
    out = out or sys.stdout
    if cfg.fmt == "json":
        payload = verdicts[0].to_dict() if cfg.command == "verify" else [v.to_dict() for v in verdicts]
        print(json.dumps(payload, sort_keys=True, indent=2), file=out)
    elif cfg.fmt == "csv":
        print(Verdict.CSV_HEADER, file=out)
        for v in verdicts:
            print(v.csv_row(), file=out)
    else:
        for v in verdicts:
            print(_verdict_text(v), file=out)


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.d is None:
        raise UsageError("verify needs --d")
    if cfg.d % 8 != 3 or cfg.d < 11:
        raise UsageError(f"d = {cfg.d} is outside the family d = 3 (mod 8), d >= 11")
    v = _run_one(cfg, cfg.d)
    _emit(cfg, [v])
    return EXIT_CODES[v.conclusion]


def _scan_worker(args: tuple[RunConfig, int]) -> Verdict:
    cfg, d = args
    return _run_one(cfg, d)


def cmd_scan(cfg: RunConfig) -> int:
    if cfg.lo is None or cfg.hi is None:
        raise UsageError("scan needs --from and --to")
    ds = admissible(cfg.lo, cfg.hi)
    verdicts: list[Verdict] = []
    if cfg.jobs > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for v in pool.map(_scan_worker, [(cfg, d) for d in ds]):
                verdicts.append(v)
                print(f"d={v.d} {v.conclusion}", file=sys.stderr, flush=True)
    else:
        for d in ds:
            v = _run_one(cfg, d)
            verdicts.append(v)
            print(f"d={v.d} {v.conclusion}", file=sys.stderr, flush=True)
    _emit(cfg, verdicts)
    if cfg.fmt == "text":
        print(scan_summary(cfg.lo, cfg.hi, verdicts))
    conclusions = {v.conclusion for v in verdicts}
    if "ERROR" in conclusions:
        return 1
    if "CONDITION_FAILED" in conclusions:
        return 3
    return 0


def scan_summary(lo: int, hi: int, verdicts: list[Verdict]) -> str:
    excluded = [v.d for v in verdicts if v.conclusion == "EXCLUDED_NOT_IN_D"]
    other = [v.d for v in verdicts if v.conclusion not in ("CERTIFIED", "EXCLUDED_NOT_IN_D")]
    certified = sum(v.conclusion == "CERTIFIED" for v in verdicts)
    text = f"{len(verdicts)} values of d = 3 (mod 8) in [{lo}, {hi}]: {certified} certified"
    if excluded:
        text += f"; SO*(2d) certified for every such d except possibly d = {', '.join(map(str, excluded))} (not in D)"
    if other:
        text += f"; not certified: {', '.join(map(str, other))}"
    return text


# ---------------------------------------------------------------------------
# reports


def cmd_density(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise UsageError("density needs --n")
    if cfg.n < 8:
        raise UsageError("--n must be at least 8")
    prof = density_profile(cfg.n)
    if cfg.fmt == "json":
        print(json.dumps(asdict(prof), sort_keys=True, indent=2))
    elif cfg.fmt == "csv":
        print(",".join(asdict(prof)))
        print(",".join(str(x) for x in asdict(prof).values()))
    else:
        print(f"n = {prof.n}")
        print(f"  binomial values C(p+1, r), 1 < r < p, up to n: {prof.b_count}")
        print(f"  bound p4(p4-1) + 2(p2-1) with p2 = {prof.p2}, p4 = {prof.p4}: {prof.bound}")
        print(f"  admissible d = 3 (mod 8) in D up to n: {prof.admissible_count}, density {prof.admissible_density:.6f} (1/8 = 0.125)")
    return 0


def cmd_dims(cfg: RunConfig) -> int:
    if cfg.d is None or cfg.d < 3:
        raise UsageError("dims needs --d >= 3")
    rep = dimension_report(cfg.d)
    if cfg.fmt == "json":
        print(json.dumps(asdict(rep), sort_keys=True, indent=2))
    elif cfg.fmt == "csv":
        print("d,kind,p,r,dim,so_star_dim,reversal")
        print(f"{rep.d},su,,,{rep.su_dim},{rep.so_star_dim},0")
        for w in rep.witnesses:
            print(f"{rep.d},exterior,{w.p},{w.r},{w.exterior_dim},{w.so_star_dim},{int(w.reversal)}")
    else:
        print(f"d = {rep.d}: dim so*(2d) = {rep.so_star_dim} < dim su(p,q) = {rep.su_dim}")
        if not rep.witnesses:
            print("  d is in D: no exterior-power competitor of dimension 2d")
        for w in rep.witnesses:
            rel = "<=" if w.reversal else ">"
            print(f"  2d = C({w.p + 1}, {w.r}): dim exterior power = {w.exterior_dim} {rel} {w.so_star_dim}"
                  + ("  (inequality reversed)" if w.reversal else ""))
    return 0


def cmd_orbit(cfg: RunConfig) -> int:
    if cfg.d is None:
        raise UsageError("orbit needs --d")
    try:
        base = make_staircase(cfg.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = orbit(base)
    rows = [
        {"vertex": i, "origami": o.to_text(), "cylinders": len(horizontal_cylinders(o)), "stratum": str(vertex_structure(o))}
        for i, o in enumerate(g.vertices)
    ]
    edges = [{"from": a, "letter": c, "to": b} for a, c, b in g.edges]
    if cfg.fmt == "json":
        print(json.dumps({"vertices": rows, "edges": edges}, indent=2))
    elif cfg.fmt == "csv":
        print("from,letter,to")
        for e in edges:
            print(f"{e['from']},{e['letter']},{e['to']}")
    else:
        print(f"orbit of the {cfg.d}-square staircase: {len(g)} vertices")
        for r in rows:
            print(f"  [{r['vertex']}] {r['origami']}  horizontal cylinders: {r['cylinders']}")
        for e in edges:
            print(f"  {e['from']} --{e['letter']}--> {e['to']}")
    return 0


COMMANDS = {"verify": cmd_verify, "scan": cmd_scan, "density": cmd_density, "dims": cmd_dims, "orbit": cmd_orbit}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"sostar: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except OutOfFamily as exc:
        print(f"sostar: usage error: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
