"""Law reports shared by every checking harness in the package.

A report is a list of named results.  Each result records how many cases
were run and, on failure, a textual counterexample.  Reports render to a
line-oriented format::

    LAW <name> PASS|FAIL ncases=<n> [counterexample=<file>]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class LawResult:
    name: str
    ncases: int = 0
    failures: int = 0
    counterexample: str | None = None
    exploratory: bool = False
    counterexample_file: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, detail=None) -> None:
        self.ncases += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = detail() if callable(detail) else str(detail)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.exploratory:
            status = "EXPLORE-" + status
        text = f"LAW {self.name} {status} ncases={self.ncases}"
        if self.counterexample_file:
            text += f" counterexample={self.counterexample_file}"
        return text


@dataclass
class LawReport:
    results: list[LawResult] = field(default_factory=list)

    def law(self, name: str, exploratory: bool = False) -> LawResult:
        for r in self.results:
            if r.name == name:
                return r
        r = LawResult(name, exploratory=exploratory)
        self.results.append(r)
        return r

    def __getitem__(self, name: str) -> LawResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(r.name == name for r in self.results)

    def extend(self, other: "LawReport") -> "LawReport":
        self.results.extend(other.results)
        return self

    @property
    def ok(self) -> bool:
        """True iff every non-exploratory law passed."""
        return all(r.passed for r in self.results if not r.exploratory)

    def failed(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed and not r.exploratory]

    def save_counterexamples(self, directory) -> None:
        directory = Path(directory)
        for r in self.results:
            if r.counterexample is not None:
                directory.mkdir(parents=True, exist_ok=True)
                path = directory / f"{r.name}.txt"
                path.write_text(r.counterexample + "\n", encoding="utf-8")
                r.counterexample_file = str(path)

    def to_text(self) -> str:
        return "\n".join(r.line() for r in self.results) + ("\n" if self.results else "")
