"""
Command handlers behind main.py

Each handler takes a validated RunConfig, prints its document to stdout and
returns the exit code: 0 success, 2 validation mismatch.
"""
import json
import logging

from app.config import auto_precision
from app.schemas.schemas import RunConfig
from app.services.basecase_service import basecase_service
from app.services.syntomic_service import syntomic_service
from app.services.verify_service import verify_service
from app.utils.formatting import (
    result_to_csv,
    result_to_json,
    result_to_text,
    table_rows,
    table_to_csv,
    table_to_text,
    tc_table_to_csv,
    tc_table_to_text,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


def cmd_zpi(config: RunConfig) -> int:
    """Z_p(i)(k[x]/x^e) for one i"""
    result = syntomic_service.zp_i(
        config.p, config.e, config.i, config.f, config.precision,
        wmax=config.wmax, jobs=config.jobs,
    )
    if config.output_format == "json":
        print(result_to_json(result, config.json_indent))
    elif config.output_format == "csv":
        print(result_to_csv(result), end="")
    else:
        print(result_to_text(result))
    return EXIT_MISMATCH if result.validated == "mismatch" else EXIT_OK


def cmd_table(config: RunConfig) -> int:
    """H^1 factors and |K_(2i-1)| for i = 1..imax"""
    i_max = config.i_max or max(config.i, 1)
    results = [
        syntomic_service.zp_i(config.p, config.e, i, config.f, wmax=config.wmax, jobs=config.jobs)
        for i in range(1, i_max + 1)
    ]
    rows = table_rows(results)
    if config.output_format == "json":
        print(json.dumps(rows, indent=config.json_indent))
    elif config.output_format == "csv":
        print(table_to_csv(rows), end="")
    else:
        print(table_to_text(rows))
    mismatched = [r.i for r in results if r.validated == "mismatch"]
    if mismatched:
        logger.warning("closed form mismatch at i = %s", mismatched)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    """Acceptance sweep; one status line per check, JSON failure report at the end"""
    # default sweep p in {3, 5, 7}; --p adds one more odd prime
    p_values = tuple(sorted({3, 5, 7, config.p} - {2}))
    report = verify_service.run(p_values=p_values, i_max=config.i_max or 12)
    for check in report.checks:
        marker = "✓" if check.passed else "✗"
        print(f"{marker} {check.name}" + (f"  ({check.detail})" if check.detail else ""))
    passed = sum(1 for c in report.checks if c.passed)
    print(f"{passed}/{len(report.checks)} checks passed")
    if not report.passed:
        failures = [c.model_dump() for c in report.failures]
        print(json.dumps({"passed": False, "failures": failures}, indent=config.json_indent))
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_tc(config: RunConfig) -> int:
    """pi_* TC(F_q; Z_p) over degrees 2 j_min - 1 .. 2 j_max"""
    N = config.precision or auto_precision(config.p, 1, max(abs(config.j_min), config.j_max, 1))
    table = basecase_service.tc_table(config.p ** config.f, (config.j_min, config.j_max), N)
    if config.output_format == "json":
        print(json.dumps(table.model_dump(), indent=config.json_indent))
    elif config.output_format == "csv":
        print(tc_table_to_csv(table), end="")
    else:
        print(tc_table_to_text(table))
    return EXIT_OK


COMMANDS = {
    "zpi": cmd_zpi,
    "table": cmd_table,
    "verify": cmd_verify,
    "tc": cmd_tc,
}
