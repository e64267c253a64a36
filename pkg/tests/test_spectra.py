"""Eigenvalue services: shooting vs finite differences, wall monotonicity,
closed-form anchors, confined hydrogen and the oscillator equivalence.

The frozen reference levels were obtained from the confluent-hypergeometric
boundary condition evaluated at 50-digit precision (Dirichlet roots found by
bisection); agreement is asked at 1e-11, two orders above that oracle's
resolution.
"""

import math

import pytest

from boxshift import (
    GridError, HydrogenSpec, InvalidPotential, LineBox, ModeSpec, RadialBox,
    confined_eigenvalue, fd_oracle, from_expression, harmonic,
    hydrogen_confined, hydrogen_confined_via_oscillator, quartic,
    unconfined_eigenvalue,
)
from boxshift.spectra import harmonic_level

BOX = LineBox(-1.0, 1.0)

# x^2 on (-1,1): Dirichlet levels.
LINE_M0_H01 = 0.10003056039514422
LINE_M2_H02 = 1.1990788504622032
# y^2 on (0,1) with the angular term.
RADIAL_NU15_M0_H01 = 0.50310137361682151
RADIAL_NU05_M1_H01 = 0.71863878353254094
# Coulomb -2/x, h=1, in a ball of radius R.
HYDROGEN_LEVELS = {
    (1, 0, 8.0): -0.99995020089148119,
    (1, 0, 14.0): -0.99999999899652826,
    (2, 0, 8.0): -0.16947744271381373,
    (2, 0, 14.0): -0.24803005886358993,
    (2, 1, 8.0): -0.20890013281233365,
    (2, 1, 14.0): -0.24908119598061245,
}


# -- frozen anchors ---------------------------------------------------------------

def test_line_ground_state_frozen():
    got = confined_eigenvalue(harmonic(), BOX, ModeSpec(level=0, h=0.1))
    assert got.value == pytest.approx(LINE_M0_H01, rel=1e-12)
    assert got.method == "shooting"
    assert got.nodes == 0
    assert got.iterations > 0 and got.steps > 0
    assert got.residual_log is not None and got.residual_log < -20.0


def test_line_second_level_frozen():
    got = confined_eigenvalue(harmonic(), BOX, ModeSpec(level=2, h=0.2)).value
    assert got == pytest.approx(LINE_M2_H02, rel=1e-12)


def test_radial_levels_frozen():
    w = harmonic(kind="radial")
    got = confined_eigenvalue(w, RadialBox(1.0), ModeSpec(level=0, h=0.1, nu=1.5))
    assert got.value == pytest.approx(RADIAL_NU15_M0_H01, rel=1e-12)
    got = confined_eigenvalue(w, RadialBox(1.0), ModeSpec(level=1, h=0.1, nu=0.5))
    assert got.value == pytest.approx(RADIAL_NU05_M1_H01, rel=1e-12)


# -- dual route: shooting against finite differences --------------------------------

@pytest.mark.parametrize("level,h", [(0, 0.15), (1, 0.1), (2, 0.2)])
def test_shooting_agrees_with_fd_on_the_line(level, h):
    p = quartic()
    mode = ModeSpec(level=level, h=h)
    shot = confined_eigenvalue(p, BOX, mode).value
    fd = fd_oracle(p, BOX, mode, grid_n=3000, count=level + 1)[level].value
    assert shot == pytest.approx(fd, rel=2e-9)


def test_shooting_agrees_with_fd_radially():
    w = quartic(kind="radial")
    mode = ModeSpec(level=1, h=0.12, nu=1.5)
    shot = confined_eigenvalue(w, RadialBox(1.0), mode).value
    fd = fd_oracle(w, RadialBox(1.0), mode, grid_n=3000, count=2)[1].value
    assert shot == pytest.approx(fd, rel=2e-9)


def test_fd_oracle_metadata():
    pair = fd_oracle(harmonic(), BOX, ModeSpec(level=0, h=0.1))[0]
    assert pair.method == "finite-difference"
    assert pair.grid_n == 2000


def test_fd_oracle_rejects_tiny_grids():
    with pytest.raises(GridError):
        fd_oracle(harmonic(), BOX, ModeSpec(level=0, h=0.1), grid_n=100)


def test_fd_oracle_detects_unresolved_crowding():
    # At h = 0.004 the first 40 levels of the well crowd into [0, 0.33];
    # a 200-point grid cannot separate the top of that stack.
    with pytest.raises(GridError):
        fd_oracle(harmonic(), BOX, ModeSpec(level=0, h=0.004),
                  grid_n=200, count=40)


# -- wall monotonicity ----------------------------------------------------------------

def test_smaller_boxes_push_levels_up():
    mode = ModeSpec(level=0, h=0.1)
    lam = {r: confined_eigenvalue(harmonic(), LineBox(-r, r), mode).value
           for r in (0.8, 1.0, 1.3)}
    assert lam[0.8] > lam[1.0] > lam[1.3] > harmonic_level(harmonic(), mode)


def test_levels_increase_with_index():
    values = [confined_eigenvalue(quartic(), BOX, ModeSpec(level=m, h=0.1)).value
              for m in range(4)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_asymmetric_box_level_sits_between_its_symmetric_bounds():
    mode = ModeSpec(level=0, h=0.1)
    lam = confined_eigenvalue(harmonic(), LineBox(-0.9, 1.4), mode).value
    lo = confined_eigenvalue(harmonic(), LineBox(-1.4, 1.4), mode).value
    hi = confined_eigenvalue(harmonic(), LineBox(-0.9, 0.9), mode).value
    assert lo < lam < hi


# -- unconfined references ---------------------------------------------------------------

def test_unconfined_harmonic_is_closed_form():
    pair = unconfined_eigenvalue(harmonic(), ModeSpec(level=3, h=0.1))
    assert pair.method == "closed-form"
    assert pair.value == 7 * 0.1


def test_unconfined_quartic_matches_big_box_fd():
    mode = ModeSpec(level=0, h=0.1)
    lam = unconfined_eigenvalue(quartic(), mode).value
    fd = fd_oracle(quartic(), LineBox(-4.0, 4.0), mode, grid_n=4000)[0].value
    assert lam == pytest.approx(fd, rel=1e-8)


def test_unconfined_radial_quartic_matches_big_box_fd():
    mode = ModeSpec(level=0, h=0.1, nu=1.5)
    w = quartic(kind="radial")
    lam = unconfined_eigenvalue(w, mode).value
    fd = fd_oracle(w, RadialBox(4.0), mode, grid_n=4000)[0].value
    assert lam == pytest.approx(fd, rel=1e-8)


def test_unconfined_level_lies_below_every_confined_level():
    mode = ModeSpec(level=1, h=0.15)
    free = unconfined_eigenvalue(quartic(), mode).value
    boxed = confined_eigenvalue(quartic(), BOX, mode).value
    assert free < boxed


# -- wrong-basin rescue ---------------------------------------------------------------------

def test_node_check_rescues_a_wrong_basin_start():
    """Starting Newton at the second even level must not be accepted for
    level 0: the node count exposes it and the retry lands correctly."""
    mode = ModeSpec(level=0, h=0.1)
    pair = confined_eigenvalue(harmonic(), BOX, mode, lam0=5 * 0.1)
    assert pair.nodes == 0
    assert pair.value == pytest.approx(LINE_M0_H01, rel=1e-10)


def test_kind_mismatch_is_rejected():
    with pytest.raises(InvalidPotential):
        confined_eigenvalue(harmonic(kind="radial"), BOX, ModeSpec(level=0, h=0.1))
    with pytest.raises(InvalidPotential):
        confined_eigenvalue(harmonic(), RadialBox(1.0), ModeSpec(level=0, h=0.1, nu=0.5))


def test_radial_mode_requires_nu():
    with pytest.raises(InvalidPotential):
        confined_eigenvalue(harmonic(kind="radial"), RadialBox(1.0),
                            ModeSpec(level=0, h=0.1))


# -- scaling laws ------------------------------------------------------------------------------

def test_harmonic_box_scaling_covariance():
    """For V = x^2, Dirichlet on (-R, R) at h equals R^2 times the unit-box
    problem at h/R^2 (substitute x -> R y)."""
    R = 1.3
    lam_big = confined_eigenvalue(harmonic(), LineBox(-R, R),
                                  ModeSpec(level=1, h=0.1)).value
    lam_unit = confined_eigenvalue(harmonic(), BOX,
                                   ModeSpec(level=1, h=0.1 / R ** 2)).value
    assert lam_big == pytest.approx(R * R * lam_unit, rel=1e-10)


def test_half_integer_nu_equals_odd_line_sector():
    """At nu = 1/2 the radial problem on (0, L) is the odd sector of the
    line problem on (-L, L): radial level m is line level 2m+1."""
    h = 0.1
    for m in (0, 1):
        radial = confined_eigenvalue(quartic(kind="radial"), RadialBox(1.0),
                                     ModeSpec(level=m, h=h, nu=0.5)).value
        line = confined_eigenvalue(quartic(), BOX,
                                   ModeSpec(level=2 * m + 1, h=h)).value
        assert radial == pytest.approx(line, rel=1e-11)


# -- confined hydrogen --------------------------------------------------------------------------

@pytest.mark.parametrize("n,ell,R", sorted(HYDROGEN_LEVELS))
def test_hydrogen_frozen_levels(n, ell, R):
    spec = HydrogenSpec(n=n, ell=ell, z=2.0, h=1.0, r_box=R)
    got = hydrogen_confined(spec)
    assert got.value == pytest.approx(HYDROGEN_LEVELS[(n, ell, R)], rel=1e-11)
    assert got.nodes == spec.level


def test_hydrogen_wall_always_raises_the_level():
    for (n, ell, R), value in HYDROGEN_LEVELS.items():
        free = HydrogenSpec(n=n, ell=ell, z=2.0, h=1.0, r_box=R).energy_unconfined
        assert value > free


def test_hydrogen_confinement_releases_with_box_size():
    e8 = HYDROGEN_LEVELS[(2, 0, 8.0)]
    e14 = HYDROGEN_LEVELS[(2, 0, 14.0)]
    assert e8 > e14 > -0.25


def test_hydrogen_large_box_recovers_the_free_level():
    spec = HydrogenSpec(n=1, ell=0, z=2.0, h=1.0, r_box=30.0)
    got = hydrogen_confined(spec).value
    assert got == pytest.approx(-1.0, abs=1e-12)


def test_hydrogen_charge_scaling():
    """x -> (2/z) x maps charge z onto charge 2: E scales by z^2/4 and the
    box by z/2, with h untouched."""
    base = hydrogen_confined(HydrogenSpec(n=2, ell=0, z=2.0, h=1.0, r_box=8.0)).value
    scaled = hydrogen_confined(HydrogenSpec(n=2, ell=0, z=4.0, h=1.0, r_box=4.0)).value
    assert scaled == pytest.approx(4.0 * base, rel=1e-10)


def test_hydrogen_oscillator_route_agrees():
    """Change of variables to the radial oscillator: an entirely different
    equation, box and angular parameter must reproduce E_n(R)."""
    for key in ((2, 0, 8.0), (2, 1, 14.0)):
        n, ell, R = key
        spec = HydrogenSpec(n=n, ell=ell, z=2.0, h=1.0, r_box=R)
        direct = hydrogen_confined(spec).value
        mapped = hydrogen_confined_via_oscillator(spec).value
        assert mapped == pytest.approx(direct, rel=1e-7)


def test_hydrogen_spec_validation():
    with pytest.raises(InvalidPotential):
        HydrogenSpec(n=1, ell=1, z=2.0, h=1.0, r_box=8.0)
    with pytest.raises(InvalidPotential):
        HydrogenSpec(n=0, ell=0, z=2.0, h=1.0, r_box=8.0)
    with pytest.raises(InvalidPotential):
        HydrogenSpec(n=1, ell=0, z=-2.0, h=1.0, r_box=8.0)
    with pytest.raises(InvalidPotential):
        HydrogenSpec(n=1, ell=0, z=2.0, h=1.0, r_box=0.0)


def test_hydrogen_spec_derived_quantities():
    spec = HydrogenSpec(n=3, ell=1, z=2.0, h=0.5, r_box=10.0)
    assert spec.level == 1
    assert spec.nu == 1.5
    assert spec.energy_unconfined == pytest.approx(-1.0 / (9 * 0.25), rel=1e-15)


# -- general expressions end to end --------------------------------------------------------------

def test_cosh_well_level_against_fd():
    p = from_expression("cosh(x) - 1")
    mode = ModeSpec(level=0, h=0.1)
    shot = confined_eigenvalue(p, BOX, mode).value
    fd = fd_oracle(p, BOX, mode, grid_n=3000)[0].value
    assert shot == pytest.approx(fd, rel=2e-9)
    # omega = sqrt(1/2) well: the level sits near omega*h, well below x^2's.
    assert shot < confined_eigenvalue(harmonic(), BOX, mode).value
