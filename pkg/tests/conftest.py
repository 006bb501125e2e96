import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from fuzzyvc.core import FunctionClass, FuzzySet, FuzzySetSystem, SetSystem  # noqa: E402
from fuzzyvc.widths import DiscreteMeasure  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def fuzzy_systems(draw, max_ground=5, max_sets=8, min_ground=0):
    n = draw(st.integers(min_ground, max_ground))
    k = draw(st.integers(0, max_sets))
    sets = []
    for _ in range(k):
        marks = draw(st.lists(st.sampled_from("+-*"), min_size=n, max_size=n))
        sets.append(FuzzySet({x for x, c in enumerate(marks) if c == "+"},
                             {x for x, c in enumerate(marks) if c == "-"}))
    return FuzzySetSystem(n, tuple(sets))


@st.composite
def set_systems(draw, max_ground=6, max_sets=8, nonempty=True):
    n = draw(st.integers(1 if nonempty else 0, max_ground))
    k = draw(st.integers(0, max_sets))
    sets = []
    for _ in range(k):
        s = draw(st.sets(st.integers(0, n - 1), min_size=1 if nonempty else 0)) if n else set()
        sets.append(s)
    return SetSystem(n, tuple(sets))


@st.composite
def function_classes(draw, max_points=3, max_rows=4, grid=4, min_rows=1, min_points=1):
    n = draw(st.integers(min_points, max_points))
    k = draw(st.integers(min_rows, max_rows))
    rows = [tuple(Fraction(draw(st.integers(0, grid)), grid) for _ in range(n)) for _ in range(k)]
    return FunctionClass(n, tuple(rows))


@st.composite
def measures(draw, size, full_support=False):
    w = draw(st.lists(st.integers(1 if full_support else 0, 4), min_size=size, max_size=size))
    if sum(w) == 0:
        w[draw(st.integers(0, size - 1))] = 1
    total = sum(w)
    return DiscreteMeasure(tuple(Fraction(v, total) for v in w))


def as_pairs(F):
    return [(frozenset(s.plus), frozenset(s.minus)) for s in F.sets]


def crisp(ground, *members):
    return FuzzySetSystem.crisp(ground, members)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
