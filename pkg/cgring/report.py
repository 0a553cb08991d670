import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence

from tabulate import tabulate

# A failing category lists at most this many offending cases.
MAX_CASES = 25


@dataclass(frozen=True)
class Check:
    id: str
    passed: bool
    detail: str = ""

    def to_json(self) -> Dict[str, str]:
        return {
            "id": self.id,
            "status": "pass" if self.passed else "fail",
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    suite: str
    checks: List[Check] = field(default_factory=list)

    def add(self, check_id: str, passed: bool, detail: str = "") -> Check:
        check = Check(check_id, bool(passed), detail)
        self.checks.append(check)
        return check

    def record(self, check_id: str, failures: Sequence[str], cases: int) -> None:
        """Adds one passing check, or one failing check per offending case."""
        if not failures:
            self.add(check_id, True, f"{cases} cases")
            return
        for detail in failures[:MAX_CASES]:
            self.add(check_id, False, detail)
        if len(failures) > MAX_CASES:
            self.add(check_id, False, f"... {len(failures) - MAX_CASES} more")

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if not c.passed)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    @property
    def exit_status(self) -> int:
        return 0 if self.ok else 1

    def failures(self, check_id: str = None) -> List[Check]:
        return [
            c
            for c in self.checks
            if not c.passed and (check_id is None or c.id == check_id)
        ]

    def check_ids(self) -> List[str]:
        return list(dict.fromkeys(c.id for c in self.checks))

    def summary(self) -> Dict[str, int]:
        return {"total": len(self.checks), "passed": self.passed, "failed": self.failed}

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "checks": [c.to_json() for c in self.checks],
            "summary": self.summary(),
            "exit_status": self.exit_status,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "VerificationReport":
        checks = [
            Check(c["id"], c["status"] == "pass", c.get("detail", ""))
            for c in data["checks"]
        ]
        return cls(data["suite"], checks)

    def to_table(self) -> str:
        rows = [[c.id, "PASS" if c.passed else "FAIL", c.detail] for c in self.checks]
        return tabulate(
            rows, headers=["Check", "Status", "Detail"], tablefmt="github"
        )


def merge(suite: str, reports: Iterable[VerificationReport]) -> VerificationReport:
    merged = VerificationReport(suite)
    for report in reports:
        for check in report.checks:
            merged.checks.append(Check(f"{report.suite}.{check.id}", check.passed, check.detail))
    return merged
