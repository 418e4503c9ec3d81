#!/usr/bin/env python3
"""Command line driver for the trace algebra computations.

    tracealg.py dims --d 3
    tracealg.py decompose --degree 7 --d 3
    tracealg.py catalog validate --lambda 3,2,2
    tracealg.py relations find --lambda 4,1,1,1 --degree 7 --d 4 --json out.json
    tracealg.py relations verify --lambda 3,2,2 --degree 7 --coeffs 2,-1,2,0
    tracealg.py relations basis --lambda 3,2,2 --degree 7
    tracealg.py hilbert kernel --order 8
    tracealg.py oracle --order 4
    tracealg.py check-all --quick

Exit status: 0 all checks pass, 1 a mathematical check failed, 2 usage error.
"""

import sys
import os
import logging
import argparse
from dataclasses import dataclass
from typing import List, Optional, Tuple

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pandas as pd

from catalog.reports import ReportStore, dumps
from catalog.store import CatalogStore, validate_group
from core.characters import omega2_truncation
from core.counts import count_table, counts
from core.glaction import TableauError
from core.hilbert import (AUTO, MAX_ORDER, NUMERATOR_VARIANTS, c0_series, c33_series,
                          check_variant, kernel_series, resolve_variant)
from core.partitions import Partition, PartitionError
from core.relfinder import RelationError, RelationFinder
from core.settings import load_config
from matrices.genmat import MODE_ALIASES, make_context

from check_all import CheckFailed, run_all, setup_logging

logger = logging.getLogger("tracealg")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    """Raised for command line input that cannot be run as given."""


@dataclass
class RunConfig:
    command: str
    action: Optional[str] = None
    d: Optional[int] = None
    degree: Optional[int] = None
    lam: Optional[Partition] = None
    mode: Optional[str] = None
    order: Optional[int] = None
    seed: Optional[int] = None
    variant: Optional[str] = None
    coeffs: Optional[List[int]] = None
    json_path: Optional[str] = None
    timing: bool = True
    quick: bool = False
    traceless: bool = False
    config_path: str = "config.yaml"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        lam = Partition.parse(args.lam) if getattr(args, 'lam', None) else None
        coeffs = None
        if getattr(args, 'coeffs', None):
            coeffs = [int(c) for c in args.coeffs.split(",")]
        return cls(command=args.command, action=getattr(args, 'action', None), d=args.d,
                   degree=args.degree, lam=lam, mode=args.mode, order=args.order, seed=args.seed,
                   variant=args.variant, coeffs=coeffs, json_path=args.json,
                   timing=not args.no_timing, quick=getattr(args, "quick", False),
                   traceless=getattr(args, "traceless", False), config_path=args.config)

    def validate(self):
        """Fill defaults that depend on other fields; UsageError on inconsistent input."""
        if self.lam is not None:
            if self.degree is None:
                self.degree = self.lam.size
            elif self.lam.size != self.degree:
                raise UsageError(f"{self.lam.label()} has size {self.lam.size}, not degree {self.degree}")
        if self.degree == 8:
            if self.d not in (None, 3):
                raise UsageError("degree 8 is only supported for d = 3")
            self.d = 3
        if self.lam is not None and self.d is None:
            self.d = len(self.lam)
        if self.lam is not None and len(self.lam) > self.d:
            raise UsageError(f"{self.lam.label()} has more than d={self.d} rows")
        if self.d is not None and self.d < 1:
            raise UsageError(f"d must be positive, got {self.d}")
        if self.order is not None and not 0 <= self.order <= MAX_ORDER:
            raise UsageError(f"--order {self.order} outside 0..{MAX_ORDER}")
        if self.command == "decompose" and self.degree is None:
            raise UsageError("decompose needs --degree")
        if self.command == "relations" and self.lam is None:
            raise UsageError("relations needs --lambda")
        if self.command == "relations" and self.action == "verify" and self.coeffs is None:
            raise UsageError("relations verify needs --coeffs")
        return self


def _partition(text: str) -> str:
    try:
        Partition.parse(text)
    except PartitionError as e:
        raise argparse.ArgumentTypeError(str(e))
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=None, help="number of matrices")
    common.add_argument("--degree", type=int, default=None)
    common.add_argument("--lambda", dest="lam", type=_partition, default=None, help="partition, e.g. 4,1,1,1")
    common.add_argument("--mode", choices=sorted(MODE_ALIASES), default=None)
    common.add_argument("--order", type=int, default=None, help="series truncation order")
    common.add_argument("--seed", type=int, default=None, help="seed of the numeric sample points")
    common.add_argument("--variant", choices=sorted(NUMERATOR_VARIANTS) + [AUTO], default=None)
    common.add_argument("--json", default=None, help="write the report to this path")
    common.add_argument("--no-timing", action="store_true", help="zero wall_ms fields in JSON output")
    common.add_argument("--config", default="config.yaml")

    parser = argparse.ArgumentParser(description="Trace algebra of generic 3x3 matrices")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dims", parents=[common], help="generator and relation counts")
    sub.add_parser("decompose", parents=[common], help="GL_d decomposition of the square of the augmentation ideal")
    cat = sub.add_parser("catalog", parents=[common], help="highest weight vector catalog")
    cat.add_argument("action", choices=["validate"])
    rel = sub.add_parser("relations", parents=[common], help="relations among catalog entries")
    rel.add_argument("action", choices=["find", "verify", "basis"])
    rel.add_argument("--coeffs", default=None,
                     help="comma separated integers for verify; write --coeffs=-6,0,... when the first is negative")
    hil = sub.add_parser("hilbert", parents=[common], help="Hilbert series for d = 3")
    hil.add_argument("action", choices=["series", "kernel", "variants"])
    hil.add_argument("--traceless", action="store_true", help="H(C0) instead of H(C33)")
    sub.add_parser("oracle", parents=[common], help="numeric rank oracle against the Hilbert series")
    chk = sub.add_parser("check-all", parents=[common], help="run every check")
    chk.add_argument("--quick", action="store_true")
    return parser


# ── commands ─────────────────────────────────────────────────────────────

def cmd_dims(cfg: RunConfig, config: dict) -> Tuple[bool, object, str]:
    ds = [cfg.d] if cfg.d else list(range(2, 7))
    rows = [counts(d) for d in ds]
    ok = all(r[f'g{k}'] == r[f'g{k}_dimsum'] for r in rows for k in range(1, 7))
    ok = ok and all(r['g'] == r['g_dimsum'] for r in rows)
    text = count_table(ds).to_string()
    for r in rows:
        if not r['r7_agree']:
            text += f"\nd={r['d']}: r7 formula {r['r7_formula']} differs from dimension sum {r['r7_dimsum']}"
    return ok, {'counts': rows}, text


def cmd_decompose(cfg: RunConfig, config: dict):
    if cfg.degree is None:
        raise UsageError("decompose needs --degree")
    d = cfg.d or 3
    decomp, dropped = omega2_truncation(cfg.degree, d)
    text = decomp.to_frame(d).to_string(index=False) + f"\ndropped: {dropped}\ndimension: {decomp.dimension(d)}"
    report = {'degree': cfg.degree, 'd': d, 'decomposition': decomp.to_json(), 'dropped': dropped,
              'dimension': decomp.dimension(d)}
    return True, report, text


def cmd_catalog(cfg: RunConfig, config: dict):
    store = CatalogStore(cfg.config_path)
    if cfg.lam is not None:
        weights = [cfg.lam]
    else:
        weights = store.weights(cfg.degree)
    workers = int(config['workers'])
    reports = []
    for lam in weights:
        d = cfg.d if cfg.d and cfg.lam is not None else (3 if lam.size == 8 else len(lam))
        ctx = make_context(d, cfg.mode or config['matrices']['mode'])
        reports.append(validate_group(store.group(lam), ctx, workers))
    frame = pd.DataFrame([{'lambda': r.lam.label(), 'd': r.d, 'entries': len(r.entries),
                           'multiplicity': r.multiplicity, 'independent': r.independent,
                           'passed': r.passed} for r in reports])
    text = frame.to_string(index=False)
    for r in reports:
        for e in r.entries:
            if not e.passed:
                text += f"\n{e.entry}: hwv={e.hwv} nonzero={e.nonzero} {'; '.join(e.errors)}"
            if e.repairs:
                text += f"\n{e.entry}: candidate repairs {', '.join(e.repairs)}"
    return all(r.passed for r in reports), {'groups': [r.to_dict() for r in reports]}, text


def _finder(cfg: RunConfig) -> RelationFinder:
    finder = RelationFinder(cfg.config_path, mode=cfg.mode and MODE_ALIASES[cfg.mode])
    if cfg.seed is not None:
        finder.seed = cfg.seed
    return finder


def cmd_relations(cfg: RunConfig, config: dict):
    if cfg.lam is None:
        raise UsageError("relations needs --lambda")
    finder = _finder(cfg)
    if cfg.action == "find":
        report = finder.find_relations(cfg.lam, cfg.degree, cfg.d)
        text = (f"{cfg.lam.label()} d={cfg.d}: {report.candidates} candidates, "
                f"{report.monomials} monomials, rank {report.rank}\nnullspace: {report.nullspace}"
                f"\nprinted: {report.printed} matched: {report.matched_printed}")
        return report.passed, report.to_dict(), text
    if cfg.action == "verify":
        if cfg.coeffs is None:
            raise UsageError("relations verify needs --coeffs")
        candidates = len(finder.store.group(cfg.lam))
        if len(cfg.coeffs) != candidates:
            raise UsageError(f"{len(cfg.coeffs)} coefficients for {candidates} candidates of {cfg.lam.label()}")
        ok = finder.verify_relation(cfg.lam, cfg.degree, cfg.d, cfg.coeffs)
        report = {'lambda': cfg.lam.label(), 'd': cfg.d, 'degree': cfg.degree, 'coeffs': cfg.coeffs,
                  'relation': ok}
        return ok, report, f"{cfg.coeffs}: {'relation' if ok else 'not a relation'}"
    basis = finder.relation_basis(cfg.lam, cfg.degree, cfg.d)
    report = {'lambda': cfg.lam.label(), 'd': cfg.d, 'degree': cfg.degree, 'count': len(basis),
              'basis': [str(b) for b in basis]}
    return True, report, f"{len(basis)} basis relations\n" + "\n".join(str(b) for b in basis)


def cmd_hilbert(cfg: RunConfig, config: dict):
    order = cfg.order if cfg.order is not None else int(config['hilbert']['order'])
    if cfg.action == "variants":
        reports = [check_variant(v, order) for v in NUMERATOR_VARIANTS]
        frame = pd.DataFrame([r.to_dict() for r in reports]).drop(columns=['errors'])
        return any(r.passed for r in reports), {'variants': [r.to_dict() for r in reports]}, frame.to_string(index=False)
    variant = resolve_variant(cfg.variant or config['hilbert']['variant'], order)
    if cfg.action == "series":
        series = c0_series(order, variant) if cfg.traceless else c33_series(order, variant)
        coeffs = series.to_dict()
        text = "\n".join(f"t^({k}): {v}" for k, v in coeffs.items())
        return True, {'order': order, 'variant': variant, 'traceless': cfg.traceless, 'series': coeffs}, text
    kernel = kernel_series(order, variant)
    lines = [f"variant: {variant}"]
    for k in range(order + 1):
        if kernel.pieces[k]:
            lines.append(f"h{k} = {kernel.decomps[k]}  (dim {kernel.dimension(k)})")
    ok = kernel.vanishes_below(7)
    return ok, kernel.to_dict(), "\n".join(lines)


def cmd_oracle(cfg: RunConfig, config: dict):
    from matrices.numcheck import c33_oracle

    max_degree = cfg.order if cfg.order is not None else 4
    num = config['numcheck']
    oracle = c33_oracle(max_degree, int(num['trials']), cfg.seed if cfg.seed is not None else int(num['seed']),
                        int(num['bound']))
    variant = resolve_variant(cfg.variant or config['hilbert']['variant'], max(max_degree, 1))
    series = c33_series(max_degree, variant)
    rows = []
    for alpha, dim in sorted(oracle.items()):
        rows.append({'multidegree': ",".join(map(str, alpha)), 'oracle': dim,
                     'series': int(series.coefficient(alpha))})
    mismatches = [r for r in rows if r['oracle'] != r['series']]
    text = pd.DataFrame(rows).to_string(index=False) if rows else "(empty)"
    return not mismatches, {'max_degree': max_degree, 'variant': variant, 'rows': rows}, text


COMMANDS = {
    'dims': cmd_dims,
    'decompose': cmd_decompose,
    'catalog': cmd_catalog,
    'relations': cmd_relations,
    'hilbert': cmd_hilbert,
    'oracle': cmd_oracle,
}


def run(cfg: RunConfig, config: dict) -> int:
    """Run one command; the exit code encodes the outcome."""
    if cfg.command == "check-all":
        passed, text, _ = run_all(cfg.config_path, cfg.quick, json_path=cfg.json_path, timing=cfg.timing)
        print(text)
        return EXIT_OK if passed else EXIT_FAILED
    passed, report, text = COMMANDS[cfg.command](cfg, config)
    print(text)
    if cfg.json_path:
        store = ReportStore(config['reports']['dir'], timing=cfg.timing)
        store.write_json(cfg.json_path, report)
    elif logger.isEnabledFor(logging.DEBUG):
        logger.debug(dumps(report, cfg.timing))
    return EXIT_OK if passed else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config(args.config)
    setup_logging(config)
    try:
        cfg = RunConfig.from_args(args).validate()
    except ValueError as e:
        logger.error(f"[tracealg] {e}")
        return EXIT_USAGE
    try:
        return run(cfg, config)
    except UsageError as e:
        logger.error(f"[tracealg] {e}")
        return EXIT_USAGE
    except (CheckFailed, ValueError, RelationError, TableauError) as e:
        logger.error(f"[tracealg] check failed: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
