import math
from fractions import Fraction

import pytest

from supershift_lab.errors import DegenerateError, DomainError, GlueError
from supershift_lab.kantorovich import (abs_target, check_loops, make_target, real_segment_errors,
                                        two_limit_experiment)
from supershift_lab.numkernel import FunctionSpec
from supershift_lab.sampling import EpsilonSpec


def test_target_validation():
    t = abs_target()
    assert t.glued is not None
    assert complex(t.value(0.1, 64)) == pytest.approx(0.8)
    assert complex(t.value(0.9, 64)) == pytest.approx(0.8)
    with pytest.raises(DegenerateError):
        make_target([0, 1], [0, 1])
    with pytest.raises(GlueError):
        make_target([0, 1], [0, 0, 1])
    assert GlueError.code == "GLUE" and DegenerateError.code == "DEGENERATE"


def test_target_from_function_specs():
    # exp branches glued at 1/2 with different slopes
    gm = FunctionSpec.exp_linear(1.0)
    gp = FunctionSpec.exp_linear(-1.0)
    with pytest.raises(GlueError):
        make_target(gm, gp)
    shifted = FunctionSpec.piecewise([(None, [math.exp(0.5) * 1.5, -math.exp(0.5)])])
    # value e^{1/2} at 1/2 but slope -e^{1/2} versus e^{1/2}
    make_target(gm, shifted)


def test_endpoint_interpolation_is_exact():
    rep = two_limit_experiment(abs_target(), 0.0, 0.9, 0.0, [10, 20, 40])
    assert rep.left.sup_errors == [0.0, 0.0, 0.0]


def test_two_limit_ladder_and_separation():
    rep = two_limit_experiment(abs_target(), 0.1, 0.9, 0.0, [50, 100, 200, 400])
    assert rep.passed
    assert all(b < a for a, b in zip(rep.left.sup_errors, rep.left.sup_errors[1:]))
    assert abs(rep.values_minus[-1] - 0.8) < 1e-10 and abs(rep.values_plus[-1] - 0.8) < 1e-10
    # the wrong limit G^+(0.1) = -0.8 sits 1.6 away
    assert rep.wrong_limit_minus[-1] == pytest.approx(1.6, abs=1e-6)
    assert rep.separation("minus") >= 10 and rep.separation("plus") >= 10
    d = rep.to_dict()
    assert d["left"]["verdict"] == "pass" and len(d["hex_minus"]) == 4


def test_loop_checks():
    assert len(check_loops(0.1, 0.9, 0.0)) == 11
    with pytest.raises(DomainError):
        check_loops(0.1, 0.9, 0.2, eta=0.05)
    with pytest.raises(DomainError):
        check_loops(0.9, 0.1, 0.0)


def test_real_segment_convergence():
    grid = [k / 20 for k in range(21)]
    rep = real_segment_errors(abs_target(), [25, 50, 100, 200], grid, EpsilonSpec.parse("zero"))
    assert all(b < a for a, b in zip(rep.sup_errors, rep.sup_errors[1:]))
    assert rep.sup_errors[0] < 0.2
