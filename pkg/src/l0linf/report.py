"""Structured pass/fail reports shared by the verification checks."""

from __future__ import annotations

from dataclasses import dataclass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class CheckItem:
    label: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class CheckReport:
    title: str
    items: tuple[CheckItem, ...]

    @property
    def ok(self) -> bool:
        return all(item.passed for item in self.items)

    def lines(self) -> list[str]:
        out = [f"== {self.title}"]
        for item in self.items:
            mark = "PASS" if item.passed else "FAIL"
            out.append(f"{mark} {item.label}" + (f": {item.detail}" if item.detail else ""))
        npass = sum(1 for item in self.items if item.passed)
        out.append(f"-- {'PASS' if self.ok else 'FAIL'} ({npass}/{len(self.items)})")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
