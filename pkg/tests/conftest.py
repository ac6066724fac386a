import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from torfacet.complexes import SimplicialComplex

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def complexes(draw, min_m=1, max_m=6):
    """Complexes given by a random facet family (possibly with ghost vertices)."""
    m = draw(st.integers(min_m, max_m))
    facets = draw(st.lists(st.integers(0, (1 << m) - 1), max_size=2 * m))
    return SimplicialComplex(m, tuple(facets) or (0,))


def brute_faces(K):
    """Faces by definition: subsets of some facet."""
    return {s for s in range(1 << K.m) if any(s & ~f == 0 for f in K.facets)}


ACCEPTANCE: list[str] = []


def record_criterion(number: int, ok: bool, text: str):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
