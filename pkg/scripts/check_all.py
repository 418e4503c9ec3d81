#!/usr/bin/env python3
"""Full verification run: counts, decompositions, highest weight vectors,
relations of degree 7 and 8, Hilbert series and the cross-checks between them.

Checks run in dependency order; a failing check is logged and recorded,
the run continues. Writes a text report (and JSON with --json).
"""

import sys
import os
import time
import logging
import argparse
import traceback
from typing import Callable, List, Optional, Tuple

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pandas as pd

from catalog.reports import ReportStore
from catalog.store import CatalogStore, validate_group
from core.characters import omega2_component
from core.counts import counts
from core.hilbert import EXPECTED_KERNEL, choose_variant, kernel_series, resolve_variant
from core.partitions import weyl_dim
from core.relfinder import ANSATZ_322_SOLUTION, RELATION_WEIGHTS, RelationFinder
from core.settings import load_config

logger = logging.getLogger("check_all")

# (name, budget in seconds)
BUDGETS = {
    'counts': 1,
    'decompositions': 30,
    'highest weight vectors': 300,
    'relations of degree 7': 1200,
    'relations of degree 8': 600,
    'hilbert series': 60,
    'cross-validation': 60,
    'r7 discrepancy': 60,
}

# weights whose minimal d is at least this are skipped by --quick
QUICK_MAX_D = 4


class CheckFailed(Exception):
    """A mathematical check did not hold."""


def _require(condition: bool, message: str):
    if not condition:
        raise CheckFailed(message)


class CheckRunner:
    def __init__(self, config_path: str = "config.yaml", quick: bool = False,
                 workers: Optional[int] = None):
        self.config = load_config(config_path)
        self.quick = quick
        self.store = CatalogStore(config_path)
        self.finder = RelationFinder(config_path, store=self.store, workers=workers)
        self.order = int(self.config['hilbert']['order'])
        self.results: List[dict] = []
        self._relations = {}
        self.variant: Optional[str] = None

    # ── individual checks ────────────────────────────────────────────────

    def check_counts(self) -> str:
        for d in range(2, 6):
            row = counts(d)
            for k in range(1, 7):
                _require(row[f'g{k}'] == row[f'g{k}_dimsum'],
                         f"g{k}({d}): closed form {row[f'g{k}']} vs dimension sum {row[f'g{k}_dimsum']}")
            _require(row['g'] == row['g_dimsum'], f"g({d}) closed form disagrees with the dimension sum")
        _require(counts(2)['g'] == 11, f"g(2) = {counts(2)['g']}, expected 11")
        _require(counts(3)['g'] == 48, f"g(3) = {counts(3)['g']}, expected 48")
        _require(counts(3)['r7_formula'] == 3 == counts(3)['r7_dimsum'], "r7(3) is not 3")
        _require(counts(3)['r8'] == 30, f"r8 = {counts(3)['r8']}, expected 30")
        return "g(2)=11, g(3)=48, r7(3)=3, r8=30"

    def check_decompositions(self) -> str:
        checked = 0
        for k in range(4, 8):
            full = omega2_component(k, k)
            for d in (3, 4):
                kept, _ = full.truncated(d)
                _require(omega2_component(k, d) == kept, f"degree {k}: truncation to d={d} is inconsistent")
            checked += 1
        for lam in self.store.weights():
            d = 3 if lam.size == 8 else len(lam)
            expected = omega2_component(lam.size, d).get(lam, 0)
            found = len(self.store.group(lam))
            _require(found == expected, f"{lam.label()}: {found} catalog entries, multiplicity {expected}")
        return f"{checked} degrees consistent, {len(self.store.weights())} catalog weights match multiplicities"

    def check_hwv(self) -> str:
        failed = []
        for lam in self.store.weights():
            d = 3 if lam.size == 8 else len(lam)
            if self.quick and d > QUICK_MAX_D:
                continue
            report = validate_group(self.store.group(lam), self.finder.context(d), self.finder.workers)
            if not report.passed:
                failed.append(lam.label())
        _require(not failed, f"catalog groups failing validation: {', '.join(failed)}")
        solutions = self.finder.solve_ansatz_322()
        _require(len(solutions) == 1, f"(3,2,2) ansatz has {len(solutions)} solutions")
        flipped = [-x for x in solutions[0]]
        _require(solutions[0] == ANSATZ_322_SOLUTION or flipped == ANSATZ_322_SOLUTION,
                 f"(3,2,2) ansatz solution {solutions[0]}")
        return f"all catalog groups pass, ansatz solution {ANSATZ_322_SOLUTION}"

    def _relations_at(self, degree: int) -> str:
        lines = []
        for lam in RELATION_WEIGHTS[degree]:
            d = 3 if degree == 8 else len(lam)
            if self.quick and d > QUICK_MAX_D:
                lines.append(f"{lam.label()} skipped")
                continue
            report = self.finder.find_relations(lam, degree, d)
            self._relations[lam] = report
            _require(report.passed, f"{lam.label()}: {report.errors or report.nullspace}")
            lines.append(f"{lam.label()} nullity {report.nullity}")
        return "; ".join(lines)

    def check_degree7(self) -> str:
        out = self._relations_at(7)
        for lam in RELATION_WEIGHTS[7]:
            if lam in self._relations:
                want = 0 if lam == (3, 1, 1, 1, 1) else 1
                _require(self._relations[lam].nullity == want,
                         f"{lam.label()}: nullity {self._relations[lam].nullity}, expected {want}")
        return out

    def check_degree8(self) -> str:
        out = self._relations_at(8)
        for lam, m in EXPECTED_KERNEL[8].items():
            _require(self._relations[lam].nullity == m,
                     f"{lam.label()}: nullity {self._relations[lam].nullity}, expected {m}")
        return out

    def check_hilbert(self) -> str:
        from matrices.numcheck import c33_oracle

        oracle = c33_oracle(4)
        variant, reports = choose_variant(self.order, oracle)
        chosen = next(r for r in reports if r.variant == variant)
        self.variant = variant
        _require(chosen.passed, f"numerator variant {variant}: {chosen.to_dict()}")
        kernel = kernel_series(self.order, variant)
        _require(kernel.vanishes_below(7), "the kernel series has terms below degree 7")
        for k, want in EXPECTED_KERNEL.items():
            if k <= self.order:
                _require(dict(kernel.decomps[k]) == want, f"h{k} = {kernel.decomps[k]}")
        return f"variant {variant}, h7 = {kernel.decomps[7]}, h8 = {kernel.decomps[8]}"

    def check_cross(self) -> str:
        kernel = kernel_series(max(self.order, 8), self.variant or resolve_variant("auto", self.order))
        lines = []
        for degree, expected in ((7, 3), (8, 30)):
            from_series = kernel.dimension(degree)
            weights = [lam for lam in RELATION_WEIGHTS[degree] if len(lam) <= 3]
            from_relations = sum(self._relations[lam].nullity * weyl_dim(lam, 3)
                                 for lam in weights if lam in self._relations)
            _require(from_series == expected, f"kernel series degree {degree}: {from_series}, expected {expected}")
            _require(from_relations == expected,
                     f"relations of degree {degree} span {from_relations}, expected {expected}")
            lines.append(f"degree {degree}: {from_series} = {from_relations}")
        return "; ".join(lines)

    def check_r7(self) -> str:
        lines = []
        for d in range(3, 7):
            row = counts(d)
            flag = "" if row['r7_agree'] else " (disagree)"
            line = f"d={d}: formula {row['r7_formula']} dimension sum {row['r7_dimsum']}{flag}"
            computed = [lam for lam in RELATION_WEIGHTS[7] if len(lam) <= d]
            if all(lam in self._relations for lam in computed):
                empirical = sum(self._relations[lam].nullity * weyl_dim(lam, d) for lam in computed)
                line += f" computed {empirical}"
            lines.append(line)
            if not row['r7_agree']:
                logger.warning(f"[check_all] r7 {line}")
        return "; ".join(lines)

    # ── driver ───────────────────────────────────────────────────────────

    def checks(self) -> List[Tuple[str, Callable[[], str]]]:
        return [
            ('counts', self.check_counts),
            ('decompositions', self.check_decompositions),
            ('highest weight vectors', self.check_hwv),
            ('relations of degree 7', self.check_degree7),
            ('relations of degree 8', self.check_degree8),
            ('hilbert series', self.check_hilbert),
            ('cross-validation', self.check_cross),
            ('r7 discrepancy', self.check_r7),
        ]

    def run(self) -> List[dict]:
        for name, check in self.checks():
            logger.info(f"[check_all] {name}...")
            start = time.time()
            row = {'check': name, 'passed': False, 'detail': '', 'budget_s': BUDGETS[name]}
            try:
                row['detail'] = check()
                row['passed'] = True
            except CheckFailed as e:
                logger.error(f"[check_all] {name}: FAILED - {e}")
                row['detail'] = str(e)
            except Exception as e:
                logger.error(f"[check_all] {name}: ERROR - {e}")
                logger.error(traceback.format_exc())
                row['detail'] = f"{type(e).__name__}: {e}"
            row['wall_ms'] = int((time.time() - start) * 1000)
            row['over_budget'] = row['wall_ms'] > 1000 * row['budget_s']
            self.results.append(row)
        return self.results

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r['passed'] for r in self.results)


def render(results: List[dict], quick: bool = False) -> str:
    lines = []
    lines.append("=" * 90)
    lines.append("TRACE ALGEBRA OF THREE 3x3 MATRICES: VERIFICATION REPORT" + ("  (quick)" if quick else ""))
    lines.append("=" * 90)
    lines.append("")
    frame = pd.DataFrame([{'check': r['check'], 'status': 'PASS' if r['passed'] else 'FAIL',
                           'seconds': round(r['wall_ms'] / 1000, 1), 'budget': r['budget_s']}
                          for r in results])
    lines.append(frame.to_string(index=False) if not frame.empty else "(no checks run)")
    lines.append("")
    lines.append("─" * 90)
    for r in results:
        lines.append(f"{r['check']}: {r['detail']}")
        if r['over_budget']:
            lines.append(f"  over budget ({r['wall_ms']} ms > {r['budget_s']} s)")
    lines.append("─" * 90)
    failed = [r['check'] for r in results if not r['passed']]
    lines.append(f"RESULT: {'ALL CHECKS PASS' if not failed else 'FAILED: ' + ', '.join(failed)}")
    lines.append("=" * 90)
    return "\n".join(lines)


def run_all(config_path: str = "config.yaml", quick: bool = False, workers: Optional[int] = None,
            json_path: Optional[str] = None, timing: bool = True) -> Tuple[bool, str, List[dict]]:
    runner = CheckRunner(config_path, quick=quick, workers=workers)
    results = runner.run()
    text = render(results, quick)
    store = ReportStore(runner.config['reports']['dir'], timing=timing)
    store.write_text("check_all.txt", text)
    if json_path:
        store.write_json(json_path, {'quick': quick, 'checks': results, 'passed': runner.passed})
    return runner.passed, text, results


def setup_logging(config: dict):
    log_cfg = config.get('logging', {})
    log_file = log_cfg.get('file', 'logs/tracealg.log')
    os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, str(log_cfg.get('level', 'INFO')).upper(), logging.INFO),
        format='%(asctime)s %(name)s %(levelname)s %(message)s',
        handlers=[logging.StreamHandler(), logging.FileHandler(log_file)],
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Run every verification and write a summary report")
    parser.add_argument("--config", default="config.yaml")
    parser.add_argument("--quick", action="store_true", help=f"skip weights needing d > {QUICK_MAX_D}")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--json", default=None, help="also write a JSON report to this path")
    parser.add_argument("--no-timing", action="store_true", help="zero wall_ms fields in JSON output")
    args = parser.parse_args(argv)

    setup_logging(load_config(args.config))
    passed, text, _ = run_all(args.config, args.quick, args.workers, args.json, not args.no_timing)
    print(text)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
