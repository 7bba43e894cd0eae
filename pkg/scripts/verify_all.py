#!/usr/bin/env python3
"""Acceptance suite — run every registered identity at its reference caps."""

import sys
from pathlib import Path

# Add project root to path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from dotenv import load_dotenv
load_dotenv()

from src.registry import CheckRequest, run_check
from src.series import SeriesError
from src.utils.logger import setup_logging
from src.vpv import vpv_ring


def vpv_caps(n: int) -> dict[str, int]:
    names = vpv_ring(n).names
    return {name: (6 if name == "z" else 3) for name in names}


SUITE = [
    ("qbinom", CheckRequest(caps={"q": 5, "a": 3, "t": 4})),
    *[("fn-det", CheckRequest(n=n, default_cap=3, caps={"a": 3, "t": 4})) for n in (1, 2, 3)],
    *[("gn-det", CheckRequest(n=n, default_cap=4, caps={"a": 2, "t": 3})) for n in (1, 2)],
    ("quotient-5-6", CheckRequest(caps={"q": 6, "t": 4})),
    *[("macmahon", CheckRequest(k=k, caps={"q": 8})) for k in (0, 1, 2, 3)],
    *[("functional-eq", CheckRequest(n=n, default_cap=3)) for n in (1, 2, 3)],
    *[("vpv-axis", CheckRequest(n=n, caps=vpv_caps(n))) for n in (2, 3, 4, 5)],
    *[("vpv-pyramid", CheckRequest(n=n, caps=vpv_caps(n))) for n in (2, 3, 4, 5)],
    ("vpv-numeric", CheckRequest(b=(0.5, 0.5), point=(0.1, 0.1), numeric_cap=40, tol=1e-6)),
    ("vpv-numeric", CheckRequest(b=(1 / 3, 1 / 3, 1 / 3), point=(0.1, 0.1, 0.1), numeric_cap=25, tol=1e-5)),
    ("binary-weights", CheckRequest(caps={"q": 12, "t": 12})),
]


def main():
    setup_logging(log_dir="", level="WARNING")
    failures = []
    for name, request in SUITE:
        try:
            report = run_check(name, request)
            ok, msg = report.passed, report.status
            if report.first_difference:
                msg += f" at {report.first_difference['monomial']}"
        except SeriesError as e:
            ok, msg = False, f"error: {e}"
        status = "OK" if ok else "FAIL"
        print(f"  [{status}] {name} {request.n or ''}: {msg}")
        if not ok:
            failures.append(name)

    if failures:
        print(f"{len(failures)} identities failed: {', '.join(failures)}")
        return 1

    print("All identities verified.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
