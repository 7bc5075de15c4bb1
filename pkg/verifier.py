#!/usr/bin/env python3

import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Optional

from config import VerifierConfig
from errors import NumericsError, PoleError
from evaluator import Evaluator
from helpers import format_bindings, format_complex, provenance_sort_key
from models import EvalResult, Identity, RegistryManifest, Report, VerificationRecord, engine_config_dict

logger = logging.getLogger(__name__)

STATUSES = ("pass", "fail", "pole_at_sample", "not_converged", "ambiguous", "known_discrepancy")
FAILING_STATUSES = ("fail", "not_converged")
# worst first; an entry takes the worst status of its samples
_SEVERITY = ("fail", "not_converged", "pole_at_sample", "known_discrepancy", "ambiguous", "pass")
SLOWEST_COUNT = 5


def relative_difference(lhs: complex, rhs: complex) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|, 1e-300)."""
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def _failed(error: Exception) -> EvalResult:
    nan = float("nan")
    return EvalResult(value=complex(nan, nan), abs_err=math.inf, converged=False, diagnostics=[str(error)])


def _evaluate_side(entry: Identity, side: str, point: dict[str, complex],
                   cfg: VerifierConfig) -> tuple[EvalResult, Optional[Exception]]:
    # a fresh Evaluator per side keeps the two evaluations independent
    evaluator = Evaluator(cfg.engine, entry.hints)
    try:
        return evaluator.evaluate(getattr(entry, side), point), None
    except NumericsError as e:
        return _failed(e), e
    except Exception as e:
        logger.error(f"Unexpected failure evaluating {side} of {entry.id}: {e!r}")
        return _failed(e), e


def classify(entry: Identity, lhs: EvalResult, rhs: EvalResult, errors: list[Exception],
             abs_diff: float, rel_diff: float, cfg: VerifierConfig) -> str:
    """Status of one sample point; registry statuses other than verify are copied, never inferred."""
    if entry.expected_status != "verify":
        return entry.expected_status
    if any(isinstance(e, PoleError) for e in errors):
        return "pole_at_sample"
    if errors or not (lhs.converged and rhs.converged):
        return "not_converged"
    if abs_diff <= cfg.tol_abs or rel_diff <= cfg.tol_rel:
        return "pass"
    return "fail"


def verify_identity(entry: Identity, cfg: Optional[VerifierConfig] = None) -> list[VerificationRecord]:
    """
    Evaluate both sides of an identity at each of its sample points.

    Engine failures become pole_at_sample or not_converged records; this
    function does not raise.

    Args:
        entry: Validated registry entry
        cfg: Tolerances and engine configuration; defaults to VerifierConfig()

    Returns:
        One VerificationRecord per sample point
    """
    cfg = cfg or VerifierConfig()
    records = []
    for index, point in enumerate(entry.samples):
        started = time.perf_counter()
        lhs, lhs_error = _evaluate_side(entry, "lhs", point, cfg)
        rhs, rhs_error = _evaluate_side(entry, "rhs", point, cfg)
        errors = [e for e in (lhs_error, rhs_error) if e is not None]
        abs_diff = abs(lhs.value - rhs.value)
        rel_diff = relative_difference(lhs.value, rhs.value)
        status = classify(entry, lhs, rhs, errors, abs_diff, rel_diff, cfg)
        elapsed = (time.perf_counter() - started) * 1000.0
        message = "; ".join(f"{side}: {e}" for side, e in (("lhs", lhs_error), ("rhs", rhs_error)) if e is not None)
        if not message and entry.expected_status != "verify":
            message = entry.note
        records.append(VerificationRecord(
            identity_id=entry.id,
            provenance=entry.provenance,
            sample_index=index,
            sample_point=dict(point),
            lhs=lhs,
            rhs=rhs,
            abs_diff=abs_diff,
            rel_diff=rel_diff,
            status=status,
            wall_time_ms=elapsed,
            message=message,
            expected_status=entry.expected_status,
        ))
        logger.info(f"{entry.id} [{entry.provenance}] sample {index + 1} ({format_bindings(point)}): {status}, "
                    f"lhs={format_complex(lhs.value, 10)} rhs={format_complex(rhs.value, 10)} "
                    f"rel_diff={rel_diff:.2e}")
    return records


def _verify_job(job: tuple[Identity, VerifierConfig]) -> list[VerificationRecord]:
    entry, cfg = job
    return verify_identity(entry, cfg)


def entry_status(records: list[VerificationRecord]) -> str:
    """Worst status among an entry's sample records."""
    return min((r.status for r in records), key=_SEVERITY.index)


def summarize(records: list[VerificationRecord], total_ms: float) -> dict[str, Any]:
    """Counts per status (records and entries), the slowest entries and the total time."""
    by_entry: dict[str, list[VerificationRecord]] = {}
    for record in records:
        by_entry.setdefault(record.identity_id, []).append(record)
    record_counts = Counter(r.status for r in records)
    entry_counts = Counter(entry_status(group) for group in by_entry.values())
    timings = sorted(
        ((sum(r.wall_time_ms for r in group), group[0]) for group in by_entry.values()),
        key=lambda item: -item[0],
    )
    return {
        "entries": len(by_entry),
        "records": len(records),
        "record_counts": {status: record_counts.get(status, 0) for status in STATUSES},
        "entry_counts": {status: entry_counts.get(status, 0) for status in STATUSES},
        "slowest": [
            {"identity_id": record.identity_id, "provenance": record.provenance, "time_ms": round(ms, 3)}
            for ms, record in timings[:SLOWEST_COUNT]
        ],
        "total_time_ms": round(total_ms, 3),
    }


def exit_code_for(records: list[VerificationRecord]) -> int:
    """0 unless a verify entry has a fail or not_converged record."""
    failing = [r for r in records if r.expected_status == "verify" and r.status in FAILING_STATUSES]
    return 1 if failing else 0


def run_all(manifest: RegistryManifest, cfg: Optional[VerifierConfig] = None) -> Report:
    """
    Verify every entry of a manifest, in parallel when cfg.jobs > 1.

    Records are sorted by provenance, id and sample index, so the output does
    not depend on the degree of parallelism.
    """
    cfg = cfg or VerifierConfig()
    started = time.perf_counter()
    jobs = [(entry, cfg) for entry in manifest.entries]
    records: list[VerificationRecord] = []
    try:
        if cfg.jobs > 1 and len(jobs) > 1:
            logger.info(f"Verifying {len(jobs)} identities with {cfg.jobs} workers")
            with ProcessPoolExecutor(max_workers=cfg.jobs) as executor:
                for batch in executor.map(_verify_job, jobs):
                    records.extend(batch)
        else:
            logger.info(f"Verifying {len(jobs)} identities")
            for job in jobs:
                records.extend(_verify_job(job))
    except Exception as e:
        logger.error(f"Verification run aborted: {e}")
        raise
    records.sort(key=lambda r: (provenance_sort_key(r.provenance), r.identity_id, r.sample_index))
    total_ms = (time.perf_counter() - started) * 1000.0

    summary = summarize(records, total_ms)
    exit_code = exit_code_for(records)
    summary["exit_code"] = exit_code
    counts = ", ".join(f"{status}={count}" for status, count in summary["entry_counts"].items() if count)
    logger.info(f"Verified {summary['entries']} identities in {total_ms / 1000:.1f} s: {counts}")
    config = {
        "registry_dir": cfg.registry_dir,
        "tol_rel": cfg.tol_rel,
        "tol_abs": cfg.tol_abs,
        "jobs": cfg.jobs,
        "engine": engine_config_dict(cfg.engine),
    }
    return Report(config=config, summary=summary, records=records, exit_code=exit_code)
