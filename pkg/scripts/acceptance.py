"""Run the acceptance criteria at both reference primes and print one line each.

    python3 scripts/acceptance.py            # all criteria
    python3 scripts/acceptance.py -k criterion5
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class AcceptanceConfig:
    test_file: Path = ROOT / "tests" / "test_acceptance.py"
    extra_args: list[str] = field(default_factory=list)

    def pytest_args(self) -> list[str]:
        return [str(self.test_file), "-q", "-p", "no:cacheprovider", *self.extra_args]


def main(argv: list[str] | None = None) -> int:
    cfg = AcceptanceConfig(extra_args=list(sys.argv[1:] if argv is None else argv))
    return int(pytest.main(cfg.pytest_args()))


if __name__ == "__main__":
    sys.exit(main())
