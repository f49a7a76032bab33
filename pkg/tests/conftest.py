import functools
import sys
import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def _corpus(kind: str):
    from cextkit import corpus
    if kind == "n1":
        return tuple(corpus.extensions_n1())
    if kind == "n2":
        return tuple(corpus.extensions_n2(8))
    if kind == "torsors":
        return tuple(corpus.torsor_corpus())
    raise KeyError(kind)


@pytest.fixture(scope="session")
def ext_n1():
    return _corpus("n1")


@pytest.fixture(scope="session")
def ext_n2():
    return _corpus("n2")


@pytest.fixture(scope="session")
def torsors():
    return _corpus("torsors")


@pytest.fixture(scope="session")
def c4_double():
    """X = C4 with f_0: C4 ↠ C2 and f_1: C4 ↠ 1 over the trivial group."""
    from cextkit.cubes import cube_of_quotients
    from cextkit.groups import cyclic, generated_subgroup
    X = cyclic(4)
    return cube_of_quotients(X, [generated_subgroup(X, [2]), generated_subgroup(X, [1])],
                             name="C4 double")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
