from __future__ import annotations

import functools
import sys

import pytest

from polycup.ingest import write_voxel_text
from polycup.pipeline import Options, run_pipeline
from polycup.shapes import standard_fixtures
from polycup.simplify import Coplanar, MinEdges

FIXTURES = standard_fixtures()


@functools.lru_cache(maxsize=None)
def cached_run(name: str, term: str = "coplanar", diagonal: str = "polygon"):
    img = FIXTURES[name][0]
    t = Coplanar() if term == "coplanar" else MinEdges(10)
    return run_pipeline(img, write_voxel_text(img), Options(t, diagonal, oracle=True))


@pytest.fixture(params=sorted(FIXTURES))
def fixture_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
