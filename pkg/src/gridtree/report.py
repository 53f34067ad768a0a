"""Structured pass/fail results shared by the verifier and tree validation."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def render(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"{self.name}: {status} {self.detail}".rstrip()


@dataclass
class VerifyReport:
    """Ordered collection of named checks; passes iff every check passes."""

    checks: dict[str, CheckResult] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = CheckResult(name, passed, detail)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def __bool__(self) -> bool:
        return self.passed

    def __getitem__(self, name: str) -> CheckResult:
        return self.checks[name]

    def __contains__(self, name: str) -> bool:
        return name in self.checks

    def failed(self) -> list[str]:
        return [n for n, c in self.checks.items() if not c.passed]

    def render(self) -> str:
        return "\n".join(c.render() for c in self.checks.values())
