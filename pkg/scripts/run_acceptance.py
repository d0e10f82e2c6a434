"""Run the ten acceptance checks and print one PASS/FAIL line each."""

import sys
import time

from ruledsolitons.acceptance import CHECKS


def main():
    failed = 0
    for check in CHECKS:
        start = time.perf_counter()
        result = check()
        failed += not result.passed
        print(f"{result.line()}  [{time.perf_counter() - start:.2f} s]")
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
