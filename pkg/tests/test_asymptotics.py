"""Leading-order shift predictions: special-function helpers, the general
quadrature-based evaluators, the stock-well closed forms, and the algebraic
identities tying them together.

The quartic reference shifts were assembled at 50 digits (quadrature of the
tunnelling integrand and of the transport equation's regular part, then the
explicit prefactor) and frozen here; the evaluator must land within 1e-11,
three orders above its own quadrature tolerance.
"""

import math

import pytest

from boxshift import (
    HydrogenSpec, InvalidPotential, LineBox, ModeSpec, from_expression,
    harmonic, lanczos_gamma, normalize_to_unit_curvature, quartic,
    shift_leading_line, shift_leading_radial,
)
from boxshift.asymptotics import (
    exact_factorial, ho_confined_closed_form, ho_shift_term,
    hydrogen_confined_closed_form, hydrogen_shift_term,
    hydrogen_wavenumber_closed_form, iso_ho_confined_closed_form,
    iso_ho_shift_term,
)

BOX = LineBox(-1.0, 1.0)

# V = x^2 + x^4 on (-1, 1), 50-digit assembly.
QUARTIC_LINE_SHIFTS = {
    (0, 0.2): 1.8851026054412078e-3,
    (0, 0.05): 1.0803062523657181e-11,
    (1, 0.2): 1.2937298966559855e-2,
    (1, 0.05): 2.9656199979688676e-10,
}
# W = x^2 + x^4 on (0, 1).
QUARTIC_RADIAL_SHIFTS = {
    (0, 0.5): 4.1251452276461229e-5,
    (1, 1.5): 3.5557714364543941e-3,
}


# -- gamma / factorial ---------------------------------------------------------

@pytest.mark.parametrize("x", [1.0, 2.0, 3.7, 5.0, 0.5, 1.5, 8.25, 12.0, 20.5])
def test_lanczos_gamma_matches_math_gamma(x):
    assert lanczos_gamma(x) == pytest.approx(math.gamma(x), rel=1e-13)


def test_lanczos_gamma_half_integers_closed_form():
    assert lanczos_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert lanczos_gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)
    assert lanczos_gamma(2.5) == pytest.approx(3 * math.sqrt(math.pi) / 4, rel=1e-13)


def test_lanczos_gamma_reflection_branch():
    # x < 0.5 goes through the reflection formula.
    assert lanczos_gamma(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-12)
    assert lanczos_gamma(0.25) == pytest.approx(math.gamma(0.25), rel=1e-13)
    with pytest.raises(ValueError):
        lanczos_gamma(-2.0)


@pytest.mark.parametrize("k", list(range(0, 25)))
def test_exact_factorial(k):
    assert exact_factorial(k) == pytest.approx(float(math.factorial(k)), rel=1e-13)
    if k <= 20:
        assert exact_factorial(k) == float(math.factorial(k))  # table is exact


def test_factorial_rejects_negative():
    with pytest.raises(ValueError):
        exact_factorial(-1)


# -- general evaluator vs closed forms (same well, independent code paths) -------

@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("R", [1.0, 1.3])
def test_line_evaluator_matches_harmonic_closed_form(m, R):
    mode = ModeSpec(level=m, h=0.2)
    general = shift_leading_line(harmonic(), LineBox(-R, R), mode)
    closed = ho_shift_term(mode, R)
    assert general.leading_value == pytest.approx(closed.leading_value, rel=1e-10)
    assert general.exponent == pytest.approx(closed.exponent, rel=1e-12)
    assert general.prefactor_power == closed.prefactor_power


@pytest.mark.parametrize("m,nu", [(0, 0.5), (1, 0.5), (0, 1.5), (2, 3.0)])
@pytest.mark.parametrize("L", [1.0, 1.2])
def test_radial_evaluator_matches_harmonic_closed_form(m, nu, L):
    mode = ModeSpec(level=m, h=0.2, nu=nu)
    general = shift_leading_radial(harmonic(kind="radial"), L, mode)
    closed = iso_ho_shift_term(mode, L)
    assert general.leading_value == pytest.approx(closed.leading_value, rel=1e-10)
    assert general.exponent == pytest.approx(closed.exponent, rel=1e-12)


@pytest.mark.parametrize("m,h", sorted(QUARTIC_LINE_SHIFTS))
def test_quartic_line_shift_frozen(m, h):
    got = shift_leading_line(quartic(), BOX, ModeSpec(level=m, h=h))
    assert got.leading_value == pytest.approx(QUARTIC_LINE_SHIFTS[(m, h)], rel=1e-11)


@pytest.mark.parametrize("m,nu", sorted(QUARTIC_RADIAL_SHIFTS))
def test_quartic_radial_shift_frozen(m, nu):
    got = shift_leading_radial(quartic(kind="radial"), 1.0,
                               ModeSpec(level=m, h=0.1, nu=nu))
    assert got.leading_value == pytest.approx(QUARTIC_RADIAL_SHIFTS[(m, nu)], rel=1e-11)


def test_asymmetric_walls_decompose_per_endpoint():
    """On (-1, 2) with V = x^2, each wall's term has an elementary closed
    form; the near wall dominates by e^(2*(phi(2)-phi(1))/h) = e^12."""
    h = 0.25
    pred = shift_leading_line(harmonic(), LineBox(-1.0, 2.0), ModeSpec(level=0, h=h))
    c = 2.0 / math.sqrt(math.pi)
    left_want = math.sqrt(h) * c * 1.0 * math.exp(-1.0 / h)
    right_want = math.sqrt(h) * c * 2.0 * math.exp(-4.0 / h)
    left, right = pred.per_endpoint
    assert left.position == -1.0 and right.position == 2.0
    assert left.value == pytest.approx(left_want, rel=1e-12)
    assert right.value == pytest.approx(right_want, rel=1e-12)
    assert pred.leading_value == pytest.approx(left.value + right.value, rel=1e-14)
    # Decay rate reported for the dominant (nearer) wall.
    assert pred.exponent == pytest.approx(2.0 * 0.5 / h, rel=1e-12)


def test_half_integer_nu_shift_identity():
    """nu = 1/2 closed forms: the radial level m equals the odd line level
    2m+1 on the doubled box, so the shift constants coincide through
    Gamma(m + 3/2) = (2m+1)! sqrt(pi) / (4^m m!)."""
    for m, h, L in ((0, 0.1, 1.0), (1, 0.1, 1.0), (2, 0.25, 1.3)):
        rad = iso_ho_shift_term(ModeSpec(level=m, h=h, nu=0.5), L)
        lin = ho_shift_term(ModeSpec(level=2 * m + 1, h=h), L)
        assert rad.leading_value == pytest.approx(lin.leading_value, rel=1e-13)
    # and for a non-harmonic well through the quadrature evaluators
    rad = shift_leading_radial(quartic(kind="radial"), 1.0,
                               ModeSpec(level=1, h=0.1, nu=0.5))
    lin = shift_leading_line(quartic(), BOX, ModeSpec(level=3, h=0.1))
    assert rad.leading_value == pytest.approx(lin.leading_value, rel=1e-11)


def test_prediction_invariant_under_curvature_normalisation():
    """Rescaling x to make V''(0) = 2 leaves the Dirichlet spectrum alone,
    so the predicted shift must not move either."""
    p = from_expression("2*x^2 + x^4")
    mode = ModeSpec(level=0, h=0.12)
    base = shift_leading_line(p, BOX, mode)
    q, dom, h2 = normalize_to_unit_curvature(p, BOX, mode.h)
    mapped = shift_leading_line(q, dom, ModeSpec(level=0, h=h2))
    assert mapped.leading_value == pytest.approx(base.leading_value, rel=1e-9)


# -- log-space behaviour far below underflow --------------------------------------

def test_underflowed_shift_keeps_its_log():
    pred = shift_leading_line(harmonic(), BOX, ModeSpec(level=0, h=0.001))
    assert pred.leading_value == 0.0  # e^-1000 is not a double
    want_log = math.log(4.0 / math.sqrt(math.pi)) + 0.5 * math.log(0.001) - 1000.0
    assert pred.log_leading_value == pytest.approx(want_log, rel=1e-12)
    for term in pred.per_endpoint:
        assert term.value == 0.0
        assert math.isfinite(term.log_value)


def test_radial_underflow_keeps_its_log():
    pred = iso_ho_shift_term(ModeSpec(level=0, h=0.001, nu=1.5), 1.0)
    assert pred.leading_value == 0.0
    want = math.log(4.0) + 1.5 * math.log(1000.0) - 1000.0 \
        - math.log(lanczos_gamma(2.5))
    assert pred.log_leading_value == pytest.approx(want, rel=1e-12)


# -- guards and warnings ------------------------------------------------------------

def test_wall_outside_barrier_rejected():
    p = from_expression("x^2 - 0.25*x^4")  # V(2) = 0: wall on the turning point
    with pytest.raises(InvalidPotential):
        shift_leading_line(p, LineBox(-2.0, 2.0), ModeSpec(level=0, h=0.1))


def test_radial_prediction_requires_nu():
    with pytest.raises(InvalidPotential):
        shift_leading_radial(quartic(kind="radial"), 1.0, ModeSpec(level=0, h=0.1))


def test_closed_form_warns_when_h_is_not_small():
    with pytest.warns(RuntimeWarning, match="not large"):
        ho_confined_closed_form(ModeSpec(level=0, h=2.0), 1.0)
    with pytest.warns(RuntimeWarning, match="not large"):
        iso_ho_confined_closed_form(ModeSpec(level=0, h=2.0, nu=0.5), 1.0)
    with pytest.warns(RuntimeWarning, match="not small"):
        hydrogen_confined_closed_form(HydrogenSpec(n=1, ell=0, z=2.0, h=1.0, r_box=2.0))


def test_closed_forms_are_level_plus_term():
    mode = ModeSpec(level=1, h=0.1)
    assert ho_confined_closed_form(mode, 1.0) == \
        3 * 0.1 + ho_shift_term(mode, 1.0).leading_value
    rmode = ModeSpec(level=1, h=0.1, nu=1.5)
    assert iso_ho_confined_closed_form(rmode, 1.0) == \
        2 * (2 + 1 + 1.5) * 0.1 + iso_ho_shift_term(rmode, 1.0).leading_value


# -- hydrogen closed forms -------------------------------------------------------------

def test_hydrogen_shift_spot_value():
    # n=1, ell=0, z=2, h=1, R=10: the prefactor collapses to 8 * 100 = 800.
    spec = HydrogenSpec(n=1, ell=0, z=2.0, h=1.0, r_box=10.0)
    pred = hydrogen_shift_term(spec)
    assert pred.leading_value == pytest.approx(800.0 * math.exp(-20.0), rel=1e-13)
    assert pred.exponent == pytest.approx(20.0, rel=1e-14)
    assert pred.prefactor_power == -6


def test_hydrogen_closed_form_is_free_level_plus_term():
    spec = HydrogenSpec(n=2, ell=1, z=2.0, h=1.0, r_box=14.0)
    assert hydrogen_confined_closed_form(spec) == \
        spec.energy_unconfined + hydrogen_shift_term(spec).leading_value


@pytest.mark.parametrize("n,ell", [(1, 0), (2, 0), (2, 1), (3, 1)])
@pytest.mark.parametrize("h,R", [(1.0, 10.0), (0.8, 14.0)])
def test_wavenumber_bootstrap_identity(n, ell, h, R):
    """Expanding E = -1/k^2 around k = n h maps the wavenumber shift onto
    the energy shift: delta E = 2 delta k / (n h)^3, exactly at leading
    order.  The two closed forms must therefore agree to rounding."""
    spec = HydrogenSpec(n=n, ell=ell, z=2.0, h=h, r_box=R)
    delta_k = hydrogen_wavenumber_closed_form(spec) - n * h
    via_k = 2.0 * delta_k / (n * h) ** 3
    direct = hydrogen_shift_term(spec).leading_value
    assert via_k == pytest.approx(direct, rel=1e-12)


def test_wavenumber_form_requires_z_two():
    with pytest.raises(InvalidPotential):
        hydrogen_wavenumber_closed_form(HydrogenSpec(n=1, ell=0, z=4.0, h=1.0, r_box=8.0))


def test_shift_predictions_are_positive():
    cases = [
        shift_leading_line(quartic(), BOX, ModeSpec(level=1, h=0.15)),
        shift_leading_radial(quartic(kind="radial"), 1.0, ModeSpec(level=0, h=0.15, nu=2.5)),
        ho_shift_term(ModeSpec(level=2, h=0.3), 1.1),
        hydrogen_shift_term(HydrogenSpec(n=2, ell=0, z=2.0, h=1.0, r_box=8.0)),
    ]
    for pred in cases:
        assert pred.leading_value > 0.0
        assert pred.exponent > 0.0
