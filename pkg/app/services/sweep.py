"""
Sweep orchestrator: enumerates (p, f, e, n, flags) cells, runs the check
suites on each and aggregates the findings into a deterministic report.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterator, List, Tuple

import numpy as np
import pandas as pd

from app.exceptions import BudgetExceeded, SerreWeightError
from app.models.schemas import CellResult, CharacterPair, FieldShape, Finding, SweepConfig
from app.services.ground import (
    consistent_flag_sets,
    is_boundary,
    is_strongly_generic,
    is_weakly_generic,
    rotation_class_representatives,
)
from app.services.verify import SUITE_CHECKS, WEAK_ONLY_SUITES, check_decomposition
from app.utils.formatting import dump_json, with_schema

logger = logging.getLogger(__name__)

TSV_COLUMNS = ["p", "f", "e", "n", "suite", "cells", "ok", "findings", "skipped",
               "refused", "error", "violations", "notes"]


class SweepReport:
    """Cells and findings of one sweep"""

    def __init__(self, config: SweepConfig):
        self.config = config
        self.cells: List[CellResult] = []
        self.findings: List[Finding] = []
        self.elapsed: float = 0.0

    def add_cell(self, cell: CellResult, findings: List[Finding]):
        self.cells.append(cell)
        self.findings.extend(findings)

    def finalize(self):
        self.cells.sort(key=CellResult.sort_key)
        self.findings.sort(key=Finding.sort_key)

    def violations(self) -> List[Finding]:
        return [f for f in self.findings if f.severity == "violation"]

    def is_valid(self) -> bool:
        return len(self.violations()) == 0

    def exit_status(self) -> int:
        return 0 if self.is_valid() else 1

    def summary(self) -> Dict:
        by_status = {}
        for cell in self.cells:
            by_status[cell.status] = by_status.get(cell.status, 0) + 1
        return {
            "cells": len(self.cells),
            "violations": len(self.violations()),
            "notes": len(self.findings) - len(self.violations()),
            "by_status": dict(sorted(by_status.items())),
        }

    def to_dict(self) -> Dict:
        exclude = {"elapsed"} if self.config.deterministic else set()
        payload = {
            "config": self.config.model_dump(),
            "summary": self.summary(),
            "cells": [c.model_dump(mode="json", exclude=exclude) for c in self.cells],
            "findings": [f.model_dump(mode="json") for f in self.findings],
        }
        if not self.config.deterministic:
            payload["elapsed"] = round(self.elapsed, 3)
        return with_schema(payload)

    def to_frame(self) -> pd.DataFrame:
        """One row per (p, f, e, n, suite), counts summed over flag sets"""
        if not self.cells:
            return pd.DataFrame(columns=TSV_COLUMNS)
        rows = []
        for cell in self.cells:
            row = {
                "p": cell.p, "f": cell.f, "e": cell.e,
                "n": ",".join(map(str, cell.n)), "suite": cell.suite,
                "cells": 1, "violations": cell.violations, "notes": cell.notes,
            }
            for status in ("ok", "findings", "skipped", "refused", "error"):
                row[status] = int(cell.status == status)
            rows.append(row)
        df = pd.DataFrame(rows)
        grouped = df.groupby(["p", "f", "e", "n", "suite"], sort=True, as_index=False).sum()
        return grouped[TSV_COLUMNS]


# ============ Cell enumeration ============
def passes_filter(shape: FieldShape, n, genericity_filter: str) -> bool:
    if genericity_filter == "weak":
        return is_weakly_generic(shape, n)
    if genericity_filter == "strong":
        return is_strongly_generic(shape, n)
    if genericity_filter == "boundary":
        return is_boundary(shape, n)
    return True


def iter_cells(config: SweepConfig) -> Iterator[CharacterPair]:
    for p in config.primes:
        for f in range(1, config.max_f + 1):
            for e in range(1, config.max_e + 1):
                if e * f > config.max_ef:
                    continue
                shape = FieldShape(p=p, f=f, e=e)
                for n in rotation_class_representatives(shape):
                    if not passes_filter(shape, n, config.genericity_filter):
                        continue
                    yield from consistent_flag_sets(shape, n, config.n2_class % shape.q)


# ============ Cell execution ============
def _cell(pair: CharacterPair, suite: str, status: str, findings: List[Finding],
          detail: str = "", elapsed: float = None) -> CellResult:
    violations = sum(1 for f in findings if f.severity == "violation")
    return CellResult(
        p=pair.p, f=pair.f, e=pair.e, n=pair.n, flags=pair.flags(), suite=suite,
        status=status, violations=violations, notes=len(findings) - violations,
        detail=detail, elapsed=elapsed,
    )


def run_suite(pair: CharacterPair, suite: str, config: SweepConfig) -> Tuple[CellResult, List[Finding]]:
    if suite in WEAK_ONLY_SUITES and not is_weakly_generic(pair.shape, pair.n):
        return _cell(pair, suite, "skipped", [], "not weakly generic"), []
    start = time.perf_counter()
    try:
        if suite == "decomposition":
            flag_bits = [int(getattr(pair, name)) for name in
                         ("chi_trivial", "chi_cyclotomic", "chi_inv_cyclotomic", "chi2_unramified")]
            rng = np.random.default_rng([config.seed, pair.p, pair.f, pair.e, *pair.n, *flag_bits])
            findings = check_decomposition(pair, config.class_samples, rng)
        else:
            findings = SUITE_CHECKS[suite](pair)
    except BudgetExceeded as err:
        return _cell(pair, suite, "refused", [], str(err)), []
    except SerreWeightError as err:
        logger.debug("suite %s failed on n=%s: %s", suite, pair.n, err)
        finding = Finding(
            suite=suite, input=pair.to_dict(), expected="no internal failure",
            observed=f"{type(err).__name__}: {err}", severity="violation",
        )
        return _cell(pair, suite, "error", [finding], str(err)), [finding]
    elapsed = None if config.deterministic else round(time.perf_counter() - start, 6)
    status = "findings" if findings else "ok"
    return _cell(pair, suite, status, findings, elapsed=elapsed), findings


def run_pair(pair: CharacterPair, config: SweepConfig) -> List[Tuple[CellResult, List[Finding]]]:
    return [run_suite(pair, suite, config) for suite in config.suites]


def _run_pair_job(args):
    return run_pair(*args)


def sweep(config: SweepConfig) -> SweepReport:
    """
    Run every selected suite on every cell of the grid. Cells never abort the
    sweep; refusals and failures are recorded on the cell.
    """
    report = SweepReport(config)
    start = time.perf_counter()
    pairs = list(iter_cells(config))
    logger.info("🔄 Starting sweep: %d cells x %d suites, %d worker(s)",
                len(pairs), len(config.suites), config.jobs)

    if config.jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = pool.map(_run_pair_job, [(pair, config) for pair in pairs], chunksize=4)
            for outcome in results:
                for cell, findings in outcome:
                    report.add_cell(cell, findings)
    else:
        shape = None
        for pair in pairs:
            if pair.shape != shape:
                shape = pair.shape
                logger.info("  → p=%d f=%d e=%d", shape.p, shape.f, shape.e)
            for cell, findings in run_pair(pair, config):
                report.add_cell(cell, findings)

    report.finalize()
    report.elapsed = time.perf_counter() - start
    summary = report.summary()
    marker = "✅" if report.is_valid() else "❌"
    logger.info("%s Sweep complete in %.2fs: %d cells, %d violations, %d notes",
                marker, report.elapsed, summary["cells"], summary["violations"], summary["notes"])
    return report


# ============ Report writers ============
def write_json(report: SweepReport, path: str = None) -> str:
    text = dump_json(report.to_dict())
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text


def write_tsv(report: SweepReport, path: str = None) -> str:
    text = report.to_frame().to_csv(sep="\t", index=False)
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text


def render_pretty(report: SweepReport) -> str:
    summary = report.summary()
    lines = [
        f"cells: {summary['cells']}  violations: {summary['violations']}  notes: {summary['notes']}",
        "status: " + ", ".join(f"{k}={v}" for k, v in summary["by_status"].items()),
    ]
    for finding in report.findings:
        where = ", ".join(f"{k}={v}" for k, v in finding.input.items())
        lines.append(f"[{finding.severity}] {finding.suite} ({where})")
        lines.append(f"    expected: {finding.expected}")
        lines.append(f"    observed: {finding.observed}")
    return "\n".join(lines) + "\n"
