import cmath
import math

import pytest

from supershift_lab.errors import DomainError, SingularTimeError
from supershift_lab.evolve import (EvolutionPoint, evolution_convergence, free_limit, free_psiN,
                                   harmonic_limit, harmonic_psiN)
from supershift_lab.superosc import eval_closed


def test_singular_time():
    with pytest.raises(SingularTimeError):
        harmonic_psiN(EvolutionPoint(math.pi / 2, 0.0, 2, 10))
    with pytest.raises(SingularTimeError):
        harmonic_limit(2, math.pi / 2, 0.0)
    assert SingularTimeError.code == "SINGULAR_TIME"
    with pytest.raises(DomainError):
        EvolutionPoint(0.0, 0.0, 2, 0)


def test_limits():
    assert free_limit(2, 0.5, 1) == pytest.approx(1)
    for t in (0.1, 0.7):
        assert harmonic_limit(0, t, 0) == pytest.approx(math.cos(t) ** -0.5)
    # a = 1 is not superoscillating: every N reproduces the plane wave
    for x, t in ((0.3, 0.2), (-1.0, 0.9)):
        assert complex(free_psiN(EvolutionPoint(t, x, 1, 7))) == pytest.approx(cmath.exp(1j * (x - t)), abs=1e-14)


@pytest.mark.parametrize("x", [-1.0, 0.25, 2.0])
def test_time_zero_matches_datum(x):
    ref = complex(eval_closed(30, 0.0, 2, x))
    assert complex(free_psiN(EvolutionPoint(0.0, x, 2, 30))) == pytest.approx(ref, abs=1e-12)
    assert complex(harmonic_psiN(EvolutionPoint(0.0, x, 2, 30))) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("potential", ["free", "harmonic"])
def test_ladder_convergence(potential):
    rep = evolution_convergence(potential, 2, [0.0, 0.3], [-1.0, 0.0, 1.0], [20, 40, 80, 160])
    assert rep.passed
    assert rep.sup_errors[-1] < rep.sup_errors[0] / 4
