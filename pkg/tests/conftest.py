import sys

import pytest

from qloopk.braid import TwistSpec
from qloopk.repcore import build_eval_rep_sl2, build_vector_rep_slN_eval
from qloopk.rootdata import GradingShift, QSPParams, SatakeDiagram, affine_A
from qloopk.scalars import const, zero


@pytest.fixture(scope="session")
def a():
    return const("a")


@pytest.fixture(scope="session")
def b():
    return const("b")


@pytest.fixture(scope="session")
def onsager():
    """The rank-one boundary datum: X empty, tau identity on the affine
    sl2 diagram, with symbolic parameters subject to gamma(delta) = 1."""
    cartan = affine_A(1)
    diagram = SatakeDiagram(cartan, (), (0, 1))
    g0, s0, s1 = const("g0"), const("s0"), const("s1")
    params = QSPParams(diagram, {0: g0.inv(), 1: g0}, {0: s0, 1: s1})
    shift = GradingShift.tau_minimal(diagram)
    twist = TwistSpec(diagram, "semi-standard")
    return {"cartan": cartan, "diagram": diagram, "params": params,
            "shift": shift, "twist": twist, "g0": g0, "s0": s0, "s1": s1}


@pytest.fixture(scope="session")
def onsager_sigma0(onsager):
    """Same datum with sigma = 0, where the highest-weight gauge
    normalization applies exactly."""
    d = onsager["diagram"]
    g0 = onsager["g0"]
    params = QSPParams(d, {0: g0.inv(), 1: g0}, {0: zero, 1: zero})
    return dict(onsager, params=params)


@pytest.fixture(scope="session")
def fund(a):
    return build_eval_rep_sl2(1, a)


@pytest.fixture(scope="session")
def fund_b(b):
    return build_eval_rep_sl2(1, b)


@pytest.fixture(scope="session")
def spin1(a):
    return build_eval_rep_sl2(2, a)


@pytest.fixture(scope="session")
def vec3(a):
    return build_vector_rep_slN_eval(3, a)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
