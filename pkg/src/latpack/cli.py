"""Command line front end: ``latpack solve`` and ``latpack list``."""
from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .catalog import SOLIDS, UnknownSolid, make_solid, reference_density
from .io import InputError, read_polytope, write_packing_off
from .polytope import DegenerateInput, EmptyInterior, Unbounded
from .search import CASES, default_threads, densest_packing

log = logging.getLogger("latpack")

EXIT_OK = 0
EXIT_INPUT = 2


@dataclass
class RunConfig:
    solid: str | None = None
    input: Path | None = None
    cases: tuple = CASES
    threads: int = 1
    exhaustive_exclusions: bool = False
    verify_exact: bool = False
    symmetry: bool = True
    emit_packing: Path | None = None
    shells: int = 1
    output: Path | None = None
    warnings: list = field(default_factory=list)


def _parse_cases(values) -> tuple:
    if not values:
        return CASES
    picked = {c.strip().upper() for v in values for c in v.split(",") if c.strip()}
    bad = picked - set(CASES)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown case(s): {', '.join(sorted(bad))}")
    return tuple(c for c in CASES if c in picked)


def _fmt(x: float) -> float:
    return float(f"{x:.15g}")


def _matrix(M) -> list:
    return [[_fmt(v) for v in row] for row in np.asarray(M, dtype=float)]


def packing_translations(basis, shells: int) -> np.ndarray:
    """Lattice vectors B z with every |z_i| <= shells."""
    rng = range(-shells, shells + 1)
    Z = np.array(list(itertools.product(rng, repeat=3)), dtype=float)
    return Z @ np.asarray(basis, dtype=float).T


def build_report(cfg: RunConfig, res, exact=None) -> dict:
    rep = {"solid" if cfg.solid else "input": cfg.solid or str(cfg.input)}
    rep.update({
        "density": _fmt(res.density),
        "critical_determinant": _fmt(res.critical_determinant),
        "basis": _matrix(res.basis),
        "case": res.case,
        "facet_selection": [int(l) for l in res.selection],
        "contact_points": _matrix(res.contact_points),
        "marginal": res.marginal,
        "verified": res.verified,
        "counts": res.counts.as_dict(),
        "cases_searched": list(res.cases_searched),
    })
    if cfg.solid:
        ref, form = reference_density(cfg.solid)
        rep["reference_density"] = _fmt(ref)
        rep["reference_form"] = form
    if exact is not None:
        rep["exact"] = {"ok": exact.ok, "density": exact.density_str, "reason": exact.reason}
    if cfg.warnings:
        rep["warnings"] = list(cfg.warnings)
    rep["runtime_ms"] = round(res.runtime_s * 1000.0, 1)
    return rep


def run(cfg: RunConfig) -> int:
    try:
        P = make_solid(cfg.solid) if cfg.solid else read_polytope(cfg.input)
    except (UnknownSolid, InputError, DegenerateInput, EmptyInterior, Unbounded, OSError,
            ValueError) as exc:
        print(f"latpack: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if set(cfg.cases) != set(CASES):
        msg = f"partial-cases: searched {','.join(cfg.cases)} only; the result may not be optimal"
        cfg.warnings.append(msg)
        print(f"latpack: warning: {msg}", file=sys.stderr)
    t0 = time.perf_counter()

    def progress(case, counts):
        log.info("case %s done after %.1fs: %s", case, time.perf_counter() - t0, counts.as_dict())

    res = densest_packing(P, cases=cfg.cases, threads=cfg.threads,
                          exhaustive=cfg.exhaustive_exclusions, progress=progress,
                          symmetry=cfg.symmetry)
    exact = None
    if cfg.verify_exact:
        from .exact import verify_exact
        exact = verify_exact(P, res)
    if cfg.emit_packing is not None:
        n = write_packing_off(cfg.emit_packing, P, packing_translations(res.basis, cfg.shells))
        log.info("wrote %d translates to %s", n, cfg.emit_packing)
    text = json.dumps(build_report(cfg, res, exact), indent=2)
    if cfg.output is not None:
        Path(cfg.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latpack",
                                 description="Densest lattice packings of 3-polytopes.")
    ap.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute the densest lattice packing")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--solid", help="catalog solid name (see 'latpack list')")
    src.add_argument("--input", type=Path, help="OFF mesh or H-rep text ('a1 a2 a3 b' per line)")
    s.add_argument("--case", action="append", metavar="CASES",
                   help="restrict to cases, e.g. --case I or --case I,III (repeatable)")
    s.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: available cores)")
    s.add_argument("--exhaustive-exclusions", action="store_true",
                   help="scan exclusion facets in cases I/II instead of deferring to case III")
    s.add_argument("--verify-exact", action="store_true",
                   help="re-certify the optimum in rational arithmetic")
    s.add_argument("--no-symmetry", action="store_true",
                   help="do not factor out the linear symmetries of P - P")
    s.add_argument("--emit-packing", type=Path, metavar="OFF",
                   help="write the packing (P translated by lattice vectors) as OFF")
    s.add_argument("--shells", type=int, default=1,
                   help="translates B z with |z_i| <= shells (default 1)")
    s.add_argument("-o", "--output", type=Path, help="write the JSON report here")

    sub.add_parser("list", help="list catalog solids and reference densities")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.command == "list":
        for name in SOLIDS:
            ref, form = reference_density(name)
            print(f"{name:30s} {ref:.10f}  {form}")
        return EXIT_OK
    try:
        cases = _parse_cases(args.case)
    except argparse.ArgumentTypeError as exc:
        print(f"latpack: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.shells < 0:
        print("latpack: input error: --shells must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        print("latpack: input error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    cfg = RunConfig(solid=args.solid, input=args.input, cases=cases, threads=threads,
                    exhaustive_exclusions=args.exhaustive_exclusions,
                    verify_exact=args.verify_exact, symmetry=not args.no_symmetry,
                    emit_packing=args.emit_packing, shells=args.shells, output=args.output)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
