"""OFF meshes and plain H-rep text files."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .polytope import Polytope, convex_hull, from_halfspaces


class InputError(ValueError):
    """A file that cannot be parsed into a polytope."""


def _data_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_off(text: str) -> tuple[np.ndarray, list[list[int]]]:
    lines = _data_lines(text)
    try:
        head = next(lines)
    except StopIteration:
        raise InputError("empty OFF file") from None
    if not head.startswith("OFF"):
        raise InputError("missing OFF header")
    rest = head[3:].split()
    try:
        counts = [int(t) for t in (rest or next(lines).split())]
    except (ValueError, StopIteration):
        raise InputError("bad OFF counts line") from None
    if len(counts) < 2:
        raise InputError("OFF counts line needs vertex and face counts")
    nv, nf = counts[0], counts[1]
    try:
        V = np.array([[float(t) for t in next(lines).split()[:3]] for _ in range(nv)])
        faces = []
        for _ in range(nf):
            toks = [int(t) for t in next(lines).split()]
            faces.append(toks[1:1 + toks[0]])
    except (ValueError, StopIteration):
        raise InputError("truncated or malformed OFF body") from None
    if V.shape != (nv, 3):
        raise InputError("OFF vertices need three coordinates")
    if any(i < 0 or i >= nv for f in faces for i in f):
        raise InputError("OFF face index out of range")
    return V, faces


def read_off(path) -> Polytope:
    """Polytope spanned by the vertices of an OFF file (faces are not trusted)."""
    V, _ = parse_off(Path(path).read_text())
    return convex_hull(V)


def format_off(vertices, faces) -> str:
    V = np.asarray(vertices, dtype=float)
    out = ["OFF", f"{len(V)} {len(faces)} 0"]
    out += [" ".join(repr(float(x)) for x in v) for v in V]
    out += [" ".join(str(int(i)) for i in [len(f), *f]) for f in faces]
    return "\n".join(out) + "\n"


def write_off(path, P: Polytope) -> None:
    Path(path).write_text(format_off(P.vertices, [list(f) for f in P.facets]))


def write_packing_off(path, P: Polytope, translations) -> int:
    """One OFF file holding a copy of P per translation vector; returns the copy count."""
    V, faces = [], []
    for t in np.asarray(translations, dtype=float).reshape(-1, 3):
        base = sum(len(v) for v in V)
        V.append(P.vertices + t)
        faces += [[base + i for i in f] for f in P.facets]
    Path(path).write_text(format_off(np.vstack(V), faces))
    return len(V)


def parse_hrep(text: str) -> np.ndarray:
    rows = []
    for n, line in enumerate(_data_lines(text), 1):
        toks = line.split()
        if len(toks) != 4:
            raise InputError(f"H-rep line {n}: expected 'a1 a2 a3 b', got {line!r}")
        try:
            rows.append([float(t) for t in toks])
        except ValueError:
            raise InputError(f"H-rep line {n}: not a number in {line!r}") from None
    if len(rows) < 4:
        raise InputError("H-rep needs at least four halfspaces")
    return np.array(rows)


def read_hrep(path) -> Polytope:
    """Polytope {x : a.x <= b} from lines 'a1 a2 a3 b' ('#' starts a comment)."""
    return from_halfspaces(parse_hrep(Path(path).read_text()))


def write_hrep(path, P: Polytope) -> None:
    lines = [" ".join(repr(float(x)) for x in (*a, b)) for a, b in zip(P.normals, P.offsets)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_polytope(path) -> Polytope:
    """Dispatch on the file content: an OFF header means a mesh, otherwise H-rep."""
    text = Path(path).read_text()
    first = next(_data_lines(text), "")
    if first.startswith("OFF"):
        V, _ = parse_off(text)
        return convex_hull(V)
    return from_halfspaces(parse_hrep(text))
