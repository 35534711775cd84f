"""End-to-end driver: image -> cubical surface -> polyhedral complex -> cup products."""
from __future__ import annotations

import hashlib
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .atmodel import ATModel, betti, check_at_model, compute_at_model, rank_oracle, transport_at_model
from .complex import CellComplex, validate
from .contraction import ChainContraction, check_contraction
from .cubical import boundary_subcomplex, build_cubical_complex
from .cup import CupPairing, cup_matrix, pairing_rank, verify_structure
from .diagonal import (aw_fan_oracle, coderivation_defect, contained_in_closure, polygon_diagonal,
                       serre_diagonal_square)
from .export import Report
from .ingest import VoxelImage
from .simplify import Coplanar, CriticalitySet, MinEdges, find_critical_vertices, simplify

STAGES = ("build", "simplify", "homology", "cup")
DIAGONALS = {"polygon": polygon_diagonal, "serre": serre_diagonal_square}


@dataclass
class Options:
    termination: MinEdges | Coplanar = field(default_factory=Coplanar)
    diagonal: str = "polygon"
    oracle: bool = False


@dataclass
class Run:
    img: VoxelImage
    report: Report
    Q: CellComplex | None = None
    dQ: CellComplex | None = None
    critical: CriticalitySet | None = None
    P: CellComplex | None = None
    contraction: ChainContraction | None = None
    model: ATModel | None = None
    pairing: CupPairing | None = None
    problems: list[str] = field(default_factory=list)

    @property
    def working(self) -> CellComplex:
        """Complex the homology and cup stages run on."""
        return self.dQ if self.report.diagonal == "serre" else self.P


@contextmanager
def _timed(run: Run, name: str):
    t0 = time.perf_counter()
    yield
    run.report.timings[name] = run.report.timings.get(name, 0.0) + time.perf_counter() - t0


def digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def run_pipeline(img: VoxelImage, raw: bytes, opts: Options, upto: str = "cup") -> Run:
    """Run the stages up to and including ``upto`` (one of :data:`STAGES`)."""
    if upto not in STAGES:
        raise ValueError(f"unknown stage {upto!r}")
    last = STAGES.index(upto)
    if opts.diagonal not in DIAGONALS:
        raise ValueError(f"unknown diagonal {opts.diagonal!r}")
    run = Run(img, Report(digest(raw)))
    r = run.report
    with _timed(run, "build"):
        run.Q = build_cubical_complex(img)
        run.dQ = boundary_subcomplex(run.Q)
        run.critical = find_critical_vertices(img, run.dQ)
    r.counts = {"Q": list(run.Q.counts()), "dQ": list(run.dQ.counts())}
    r.critical_vertices = len(run.critical)
    if last < 1:
        return run
    with _timed(run, "simplify"):
        run.P, run.contraction = simplify(run.dQ, img, opts.termination, critical=run.critical)
    r.counts["P"] = list(run.P.counts())
    r.termination = opts.termination.describe()
    if last < 2:
        return run
    r.diagonal = opts.diagonal
    with _timed(run, "homology"):
        run.model = compute_at_model(run.working)
    r.betti = list(betti(run.model))
    if last < 3:
        return run
    with _timed(run, "cup"):
        run.pairing = cup_matrix(run.working, run.model, DIAGONALS[opts.diagonal], keep_diagonals=opts.oracle)
    r.set_cup(run.pairing.nonzero_triples())
    r.pairing_rank = pairing_rank(run.pairing)
    if opts.oracle:
        with _timed(run, "oracle"):
            oracle_checks(run)
    return run


def _record(run: Run, name: str, problems: list[str]) -> None:
    run.report.checks[name] = not problems
    run.problems += [f"{name}: {p}" for p in problems]


def oracle_checks(run: Run) -> None:
    """Independent rank computation and the other diagonal on the other complex."""
    r = run.report
    ranks_q, ranks_p = list(rank_oracle(run.dQ)), list(rank_oracle(run.P))
    mismatch = []
    if ranks_q != r.betti or ranks_p != r.betti:
        mismatch.append(f"betti {r.betti} vs rank oracle dQ {ranks_q}, P {ranks_p}")
    _record(run, "betti_rank_oracle", mismatch)

    other = "serre" if r.diagonal == "polygon" else "polygon"
    X = run.dQ if other == "serre" else run.P
    m = compute_at_model(X)
    cp = cup_matrix(X, m, DIAGONALS[other])
    mismatch = []
    if list(betti(m)) != r.betti:
        mismatch.append(f"betti {r.betti} vs {list(betti(m))} on the {other} path")
    if pairing_rank(cp) != r.pairing_rank:
        mismatch.append(f"pairing rank {r.pairing_rank} vs {pairing_rank(cp)} on the {other} path")
    _record(run, "path_independence", mismatch)
    _record(run, "cup_structure", verify_structure(run.pairing, run.model).problems
            + verify_structure(cp, m).problems)


def verify_checks(run: Run) -> None:
    """Everything :func:`oracle_checks` does plus the full identity suite.

    Expects a run that went through the cup stage with ``oracle`` set.
    """
    if "path_independence" not in run.report.checks:
        oracle_checks(run)
    _record(run, "complex_valid", validate(run.dQ) + validate(run.P))
    _record(run, "contraction_identities", check_contraction(run.contraction))
    mP = run.model if run.working is run.P else compute_at_model(run.P)
    _record(run, "at_model_identities", check_at_model(mP)
            + check_at_model(transport_at_model(run.contraction, mP)))
    problems = []
    for p in run.P.cells(2):
        if coderivation_defect(run.P, p, polygon_diagonal):
            problems.append(f"polygon {p}")
        if not contained_in_closure(run.P, p, polygon_diagonal(run.P, p)):
            problems.append(f"polygon {p} diagonal leaves its closure")
    for q in run.dQ.cells(2):
        if coderivation_defect(run.dQ, q, serre_diagonal_square):
            problems.append(f"square {q}")
    _record(run, "coderivation", problems)
    _record(run, "fan_oracle", [f"polygon {p}" for p in run.P.cells(2)
                                if polygon_diagonal(run.P, p) != aw_fan_oracle(run.P, p)])
