"""Sorts of the two-sorted (value group / residue rings) language."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import SortError


@dataclass(frozen=True, order=True)
class Sort:
    kind: str  # 'vg', 'vginf', 'rf' or 'bool'
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("vg", "vginf", "rf", "bool"):
            raise SortError(f"unknown sort kind {self.kind!r}")
        if self.kind == "rf" and self.n < 1:
            raise SortError(f"RF sort needs n >= 1, got {self.n}")
        if self.kind != "rf" and self.n != 0:
            raise SortError("only RF sorts carry an index")

    @property
    def is_vg(self) -> bool:
        return self.kind in ("vg", "vginf")

    @property
    def is_rf(self) -> bool:
        return self.kind == "rf"

    def __str__(self) -> str:
        return f"rf[{self.n}]" if self.kind == "rf" else self.kind

    def to_json(self):
        return {"kind": self.kind, "n": self.n} if self.kind == "rf" else {"kind": self.kind}

    @staticmethod
    def from_json(d) -> "Sort":
        return Sort(d["kind"], d.get("n", 0))


VG = Sort("vg")
VGINF = Sort("vginf")
BOOL = Sort("bool")


def RF(n: int) -> Sort:
    return Sort("rf", n)


def parse_sort(text: str) -> Sort:
    t = text.strip().replace(" ", "")
    if t == "vg":
        return VG
    if t == "vginf":
        return VGINF
    if t.startswith("rf[") and t.endswith("]"):
        try:
            return RF(int(t[3:-1]))
        except ValueError:
            pass
    raise SortError(f"bad sort {text!r}")
