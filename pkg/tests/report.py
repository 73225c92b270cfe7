"""Collects acceptance outcomes; conftest prints one line per criterion at the end."""
from collections import OrderedDict

_RESULTS: "OrderedDict[int, list]" = OrderedDict()
TITLES = {
    1: "density reproduction, fast tier",
    2: "density reproduction, extended tier",
    3: "basis verification",
    4: "polynomial-solver oracle suite",
    5: "resultant identities",
    6: "pruning soundness",
    7: "affine invariance",
    8: "packing validity",
}


def record(criterion: int, ok: bool, detail: str) -> None:
    _RESULTS.setdefault(criterion, []).append((bool(ok), detail))
    print(f"  criterion {criterion}: {'ok  ' if ok else 'FAIL'} {detail}")


def lines() -> list[str]:
    out = []
    for c in sorted(_RESULTS):
        items = _RESULTS[c]
        bad = [d for ok, d in items if not ok]
        status = "PASS" if not bad else "FAIL"
        tail = f"{len(items)} of {len(items)} checks ok" if not bad else "; ".join(bad)
        out.append(f"[{status}] criterion {c} ({TITLES[c]}): {tail}")
    return out
