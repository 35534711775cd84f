"""``polycup`` command line."""
from __future__ import annotations

import argparse
import sys

from .export import export_obj, report_json
from .atmodel import representative_cycles
from .ingest import VoxelFormatError, load_image
from .pipeline import Options, run_pipeline, verify_checks
from .simplify import Coplanar, MinEdges

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

_UPTO = {"build": "build", "simplify": "simplify", "homology": "homology", "export": "homology",
         "cup": "cup", "verify": "cup"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"polycup: [usage] {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polycup", description="Cohomology ring of binary voxel images over Z/2.")
    p.add_argument("command", choices=list(_UPTO))
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--format", choices=["text", "vox3"], default=None,
                   help="input format (default: sniff the VOX3 magic)")
    p.add_argument("--terminate", choices=["min-edges", "coplanar"], default="coplanar")
    p.add_argument("--min-edges", type=int, default=10, metavar="M")
    p.add_argument("--diagonal", choices=["polygon", "serre"], default="polygon")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check with the rank oracle and the other diagonal; exit 2 on mismatch")
    p.add_argument("--output", metavar="PATH", help="write the JSON report here instead of stdout")
    p.add_argument("--obj", metavar="PATH", help="write the complex and 1-cycles as Wavefront OBJ")
    p.add_argument("--timings", action="store_true", help="include stage timings in the report")
    return p


def _fail(stage: str, msg: str, code: int) -> int:
    print(f"polycup: [{stage}] {msg}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.min_edges < 3:
        return _fail("usage", "--min-edges must be at least 3", EXIT_USAGE)
    if args.command == "export" and not (args.obj or args.output):
        return _fail("usage", "export needs --obj PATH (or --output PATH)", EXIT_USAGE)
    term = MinEdges(args.min_edges) if args.terminate == "min-edges" else Coplanar()
    opts = Options(term, args.diagonal, oracle=args.oracle or args.command == "verify")

    try:
        img, raw = load_image(args.input, args.format)
    except OSError as exc:
        return _fail("ingest", f"cannot read {args.input}: {exc.strerror or exc}", EXIT_USAGE)
    except VoxelFormatError as exc:
        return _fail("ingest", str(exc), EXIT_USAGE)

    run = run_pipeline(img, raw, opts, upto=_UPTO[args.command])
    if args.command == "verify":
        verify_checks(run)

    try:
        obj_path = args.obj or (args.output if args.command == "export" else None)
        if obj_path:
            X = run.working if run.model is not None else (run.P or run.dQ)
            cycles = representative_cycles(run.model, 1) if run.model is not None else []
            export_obj(X, cycles, obj_path)
        if args.command != "export" or (args.obj and args.output):
            text = report_json(run.report, include_timings=args.timings)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
    except OSError as exc:
        return _fail("export", f"cannot write output: {exc}", EXIT_USAGE)

    if run.problems:
        for p in run.problems:
            print(f"polycup: [verify] {p}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
