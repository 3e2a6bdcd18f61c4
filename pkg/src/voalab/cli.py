"""Command line interface: ``voalab verify|character|lowest|cache-gc``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for
configuration errors (bad arguments, unreadable config files, parameters that
violate a suite's hypotheses).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .cache import BlockCache, cache_gc, default_cache_dir
from .report import VerificationReport
from .scalar import as_fraction, format_scalar
from .zhu import HypothesisError

__all__ = ["RunConfig", "ConfigError", "load_config_file", "run", "main", "SUITES"]

SUITES = ("n4", "zhu", "modules", "a2", "coset")
DEFAULT_CUTOFFS = {"n4": Fraction(5, 2), "zhu": Fraction(4), "modules": Fraction(7, 2),
                   "a2": Fraction(3), "coset": Fraction(4)}


class ConfigError(ValueError):
    """Invalid run configuration (exit status 2)."""


@dataclass
class RunConfig:
    suites: List[str] = field(default_factory=lambda: list(SUITES))
    cutoffs: Dict[str, Fraction] = field(default_factory=dict)
    r_values: List[Fraction] = field(default_factory=lambda: [Fraction(1, 2)])
    mu_values: List[Fraction] = field(default_factory=lambda: [Fraction(0), Fraction(1, 3)])
    lam_values: List[Fraction] = field(default_factory=lambda: [Fraction(0)])
    window: int = 6
    seed: int = 11
    cache_dir: Optional[Path] = None
    use_cache: bool = True
    output: Optional[Path] = None

    def cutoff(self, suite: str) -> Fraction:
        return self.cutoffs.get(suite, DEFAULT_CUTOFFS[suite])

    def echo(self) -> Dict[str, object]:
        return {"suites": self.suites, "cutoffs": {k: str(self.cutoff(k)) for k in self.suites},
                "r": [str(x) for x in self.r_values], "mu": [str(x) for x in self.mu_values],
                "lambda": [str(x) for x in self.lam_values], "window": self.window, "seed": self.seed}


# ---------------------------------------------------------------------------
# parsing and validation
# ---------------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"not an exact rational: {text!r}") from exc


def parse_list(text: str) -> List[Fraction]:
    return [parse_rational(t) for t in text.split(",") if t.strip()]


def load_config_file(path) -> Dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment; rationals stay strings."""
    out: Dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        k, v = (x.strip() for x in line.split("=", 1))
        out[k] = v
    return out


def apply_config(cfg: RunConfig, values: Dict[str, str]) -> RunConfig:
    for k, v in values.items():
        if k == "suites":
            cfg.suites = [s.strip() for s in v.split(",") if s.strip()]
        elif k.startswith("max_weight."):
            cfg.cutoffs[k.split(".", 1)[1]] = parse_rational(v)
        elif k == "r":
            cfg.r_values = parse_list(v)
        elif k == "mu":
            cfg.mu_values = parse_list(v)
        elif k == "lambda":
            cfg.lam_values = parse_list(v)
        elif k == "window":
            cfg.window = _int(v)
        elif k == "seed":
            cfg.seed = _int(v)
        elif k == "cache_dir":
            cfg.cache_dir = Path(v)
        elif k == "output":
            cfg.output = Path(v)
        elif k == "cache":
            cfg.use_cache = v.lower() not in ("0", "off", "false", "no")
        else:
            raise ConfigError(f"unknown config key {k!r}")
    return cfg


def _int(v: str) -> int:
    try:
        return int(v)
    except ValueError as exc:
        raise ConfigError(f"not an integer: {v!r}") from exc


def _frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def validate(cfg: RunConfig) -> None:
    for s in cfg.suites:
        if s not in SUITES:
            raise ConfigError(f"unknown suite {s!r}")
    for s, c in cfg.cutoffs.items():
        if s not in SUITES:
            raise ConfigError(f"cutoff for unknown suite {s!r}")
        if c <= 0 or (2 * c).denominator != 1:
            raise ConfigError(f"cutoff for {s} must be a positive half-integer, got {c}")
    if cfg.window < 0:
        raise ConfigError("window must be non-negative")
    for r in cfg.r_values:
        if r.denominator == 1:
            raise HypothesisError(f"r = {r} is an integer")
    for mu in cfg.mu_values:
        if not (0 <= mu < 1):
            raise ConfigError(f"mu = {mu} must lie in [0, 1)")
        if _frac_part(mu - Fraction(1, 2)) == 0:
            raise HypothesisError("mu + Z = 1/2 + Z is excluded")
    if "coset" in cfg.suites and cfg.cutoff("coset") > 6:
        raise ConfigError("coset cutoff above 6 is refused (cost guard)")
    if "a2" in cfg.suites and cfg.cutoff("a2") < 3:
        raise ConfigError("a2 cutoff must be at least 3")


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _suite_n4(cfg: RunConfig) -> List[VerificationReport]:
    from .n4 import (verify_kernel_characterization, verify_g_gbar_identity, verify_n2_vectors,
                     verify_n4_table, verify_wakimoto)
    return [verify_n4_table(), verify_g_gbar_identity(), verify_wakimoto(), verify_n2_vectors(),
            verify_kernel_characterization(cfg.cutoff("n4"))]


def _suite_zhu(cfg: RunConfig) -> List[VerificationReport]:
    from .zhu import n4_context, zhu_relation_suite
    return [zhu_relation_suite(n4_context(mu, cfg.cutoff("zhu"))) for mu in cfg.mu_values]


def _twisted_mu(cfg: RunConfig) -> List[Fraction]:
    return [mu for mu in cfg.mu_values if mu != 0]


def _suite_modules(cfg: RunConfig) -> List[VerificationReport]:
    from .amodules import verify_character, verify_logarithmic, verify_relaxed, verify_twisted
    reps = []
    for r in cfg.r_values:
        reps.append(verify_relaxed(r))
        reps.append(verify_character(r, cfg.cutoff("modules"), cfg.window))
        for mu in _twisted_mu(cfg):
            reps.append(verify_twisted(r, mu, seed=cfg.seed))
    for lam in cfg.lam_values:
        reps.append(verify_logarithmic(lam))
    return reps


def _suite_a2(cfg: RunConfig) -> List[VerificationReport]:
    from .affine2 import (verify_a2_relations, verify_categoryO_vectors, verify_Eij, verify_Ls,
                          verify_zhu_a2)
    reps = [verify_a2_relations(), verify_zhu_a2(cfg.cutoff("a2")), verify_categoryO_vectors()]
    for r in cfg.r_values:
        for mu in _twisted_mu(cfg):
            reps.append(verify_Ls(r, mu))
            reps.append(verify_Eij(r, mu, 3))
    return reps


def _suite_coset(cfg: RunConfig) -> List[VerificationReport]:
    from .affine2 import coset_dims
    return [coset_dims(cfg.cutoff("coset"))]


SUITE_RUNNERS: Dict[str, Callable[[RunConfig], List[VerificationReport]]] = {
    "n4": _suite_n4, "zhu": _suite_zhu, "modules": _suite_modules, "a2": _suite_a2,
    "coset": _suite_coset,
}


def run(cfg: RunConfig, out=None) -> int:
    """Run the configured suites; print one summary line per check; return the exit status."""
    out = sys.stdout if out is None else out
    from .vertex import set_block_cache
    validate(cfg)
    cache = None
    if cfg.use_cache:
        cache = BlockCache(cfg.cache_dir or default_cache_dir())
    reports: List[VerificationReport] = []
    set_block_cache(cache)
    try:
        if cache is not None:
            with cache.run_lock():
                for s in cfg.suites:
                    reports.extend(SUITE_RUNNERS[s](cfg))
        else:
            for s in cfg.suites:
                reports.extend(SUITE_RUNNERS[s](cfg))
    finally:
        set_block_cache(None)
    ok = all(r.passed for r in reports)
    for r in reports:
        for line in r.summary_lines():
            print(line, file=out)
    doc = {"status": "pass" if ok else "fail", "config": cfg.echo(),
           "reports": [r.to_obj() for r in reports]}
    if cache is not None:
        doc["cache"] = {"hits": cache.hits, "misses": cache.misses, "quarantined": cache.quarantined}
    if cfg.output:
        cfg.output.write_text(json.dumps(doc, sort_keys=True, indent=2, default=str))
    print(f"{'PASS' if ok else 'FAIL'}: {sum(len(r.items) for r in reports)} checks in "
          f"{len(reports)} reports", file=out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# other subcommands
# ---------------------------------------------------------------------------

def character_table(r, max_weight, window, fmt: str) -> str:
    from .amodules import ModuleDescriptor, bigraded_dims
    d = ModuleDescriptor("relaxed", r=r)
    if d.hypotheses():
        raise HypothesisError("; ".join(d.hypotheses()))
    ch = bigraded_dims(d, max_weight, window)
    rows = ch.rows()
    if fmt == "json":
        return json.dumps({"module": d.label(), "max_weight": str(ch.weight_cutoff),
                           "window": window, "offset": str(ch.offset),
                           "rows": [{"weight": str(w), "charge": str(c), "dim": n} for w, c, n in rows]},
                          indent=2)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["weight", "charge", "dim"])
    for w, c, n in rows:
        wr.writerow([str(w), str(c), n])
    return buf.getvalue()


def lowest_table(module: str, r, mu, window: int) -> Dict[str, object]:
    """Zero-mode matrices on the lowest component, keyed by basis label."""
    if module in ("relaxed", "spectral-flow"):
        from .amodules import ModuleDescriptor, lowest_component
        d = ModuleDescriptor(module, r=r, mu=mu if module == "spectral-flow" else 0)
        if d.hypotheses():
            raise HypothesisError("; ".join(d.hypotheses()))
        lc = lowest_component(d, (-window, window))
        rows = []
        for i in range(-window, window + 1):
            rows.append({"i": i, "e": format_scalar(lc.e[i]), "h": format_scalar(lc.h[i]),
                         "f": format_scalar(lc.f[i]), "gauge": lc.gauge[i]})
        return {"module": d.label(), "basis": "E_i", "rows": rows}
    if module == "Ls":
        from .affine2 import OPS, _fix_gauge, lowest_a2_matrices
        from .amodules import ModuleDescriptor
        d = ModuleDescriptor("spectral-flow", r=r, mu=mu)
        if d.hypotheses():
            raise HypothesisError("; ".join(d.hypotheses()))
        lm = lowest_a2_matrices(r, mu, window)
        if not _fix_gauge(lm):
            raise RuntimeError("no sign gauge matches the lowest component")
        rows = []
        for i in range(-window, window + 1):
            for j in range(-window, window + 1):
                row = {"i": i, "j": j, "gauge": lm.gauge[(i, j)]}
                for op in OPS:
                    row[op] = format_scalar(lm.gauged(op, i, j))
                rows.append(row)
        return {"module": f"L_0(M^{mu}({r}))", "basis": "E_ij", "rows": rows}
    raise ConfigError(f"unknown module {module!r}")


def _parse_size(text: str) -> int:
    units = {"k": 1024, "m": 1024 ** 2, "g": 1024 ** 3}
    t = text.strip().lower()
    try:
        if t and t[-1] in units:
            return int(float(t[:-1]) * units[t[-1]])
        return int(t)
    except ValueError as exc:
        raise ConfigError(f"bad size {text!r}") from exc


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="voalab", description="Exact verification of lattice "
                                "realizations of the N=4 algebra at c=-9 and affine A2 at level -3/2.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--config", help="flat key = value config file")
    v.add_argument("--max-weight", help="weight cutoff for the selected suite")
    v.add_argument("--r", help="comma separated r values")
    v.add_argument("--mu", help="comma separated twist parameters")
    v.add_argument("--lambda", dest="lam", help="comma separated lambda values")
    v.add_argument("--window", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--output", help="write the JSON report here")
    v.add_argument("--cache-dir")
    v.add_argument("--no-cache", action="store_true")

    c = sub.add_parser("character", help="bigraded dimensions of M(r)")
    c.add_argument("--r", required=True)
    c.add_argument("--max-weight", required=True)
    c.add_argument("--window", type=int, default=6)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--output")

    lo = sub.add_parser("lowest", help="zero-mode matrices on a lowest component")
    lo.add_argument("--module", choices=("relaxed", "spectral-flow", "Ls"), default="relaxed")
    lo.add_argument("--r", required=True)
    lo.add_argument("--mu", default="0")
    lo.add_argument("--window", type=int, default=3)

    g = sub.add_parser("cache-gc", help="evict least recently used cache files")
    g.add_argument("--max-bytes", default="256m")
    g.add_argument("--cache-dir")
    return p


def _config_from_args(a) -> RunConfig:
    cfg = RunConfig()
    if a.config:
        apply_config(cfg, load_config_file(a.config))
    if a.suite != "all":
        cfg.suites = [a.suite]
    elif not a.config:
        cfg.suites = list(SUITES)
    if a.max_weight is not None:
        mw = parse_rational(a.max_weight)
        for s in cfg.suites:
            cfg.cutoffs[s] = mw
    if a.r is not None:
        cfg.r_values = parse_list(a.r)
    if a.mu is not None:
        cfg.mu_values = parse_list(a.mu)
    if a.lam is not None:
        cfg.lam_values = parse_list(a.lam)
    if a.window is not None:
        cfg.window = a.window
    if a.seed is not None:
        cfg.seed = a.seed
    if a.output:
        cfg.output = Path(a.output)
    if a.cache_dir:
        cfg.cache_dir = Path(a.cache_dir)
    if a.no_cache:
        cfg.use_cache = False
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if a.command == "verify":
            return run(_config_from_args(a))
        if a.command == "character":
            text = character_table(parse_rational(a.r), parse_rational(a.max_weight), a.window, a.format)
            if a.output:
                Path(a.output).write_text(text)
            else:
                sys.stdout.write(text if text.endswith("\n") else text + "\n")
            return 0
        if a.command == "lowest":
            doc = lowest_table(a.module, parse_rational(a.r), parse_rational(a.mu), a.window)
            print(json.dumps(doc, indent=2))
            return 0
        if a.command == "cache-gc":
            root = Path(a.cache_dir) if a.cache_dir else default_cache_dir()
            print(json.dumps(cache_gc(root, _parse_size(a.max_bytes)).to_obj(), indent=2))
            return 0
    except (ConfigError, HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
