import math

import pytest

import langevin_bounds as lb
from langevin_bounds.errors import InfeasibleSError
from langevin_bounds.pgf import BindingConstraint

from oracles import mp_bound_closed, mp_bound_product, mp_components

# The (y, b) grid for the closed-form vs product-form identity; five
# feasible s per (y, b) pair are taken strictly inside (1, s_hi).
IDENTITY_Y = (1.0, 1.5, 2.0, 5.0, 10.0)
IDENTITY_B = (1.1, 2.0, 3.0)


def _feasible_s_grid(b: float, n: int = 5) -> list[float]:
    s_hi = lb.feasible_s_range(b).s_hi
    return [1.0 + (k / (n + 1)) * (s_hi - 1.0) for k in range(1, n + 1)]


@pytest.mark.parametrize("s,b", [(1.4, 2.0), (1.3, 1.1), (1.05, 1.2), (1.49, 2.0)])
def test_components_match_high_precision_oracle(s, b):
    comp = lb.components(s, b)
    ref = mp_components(s, b)
    assert comp.log_s == pytest.approx(ref["log_s"], rel=1e-14)
    assert comp.c == pytest.approx(ref["c"], rel=1e-13)
    assert comp.alpha == pytest.approx(ref["alpha"], rel=1e-13)
    assert comp.ratio == pytest.approx(ref["ratio"], rel=1e-13)


def test_components_example_values():
    # frozen from the 40-digit oracle
    comp = lb.components(1.4, 2.0)
    assert comp.alpha == pytest.approx(0.17597820003225448, rel=1e-13)
    assert comp.c == pytest.approx(0.82033192869863705, rel=1e-13)
    assert comp.ratio == pytest.approx(1.7484599533547213, rel=1e-13)
    comp = lb.components(1.3, 1.1)
    assert comp.alpha == pytest.approx(0.27218874671515979, rel=1e-13)
    assert comp.ratio == pytest.approx(1.7529953544143265, rel=1e-13)


def test_components_error_clauses():
    with pytest.raises(InfeasibleSError) as err:
        lb.components(1.0, 2.0)
    assert err.value.clause == "out-of-domain"
    with pytest.raises(InfeasibleSError) as err:
        lb.components(0.5, 2.0)
    assert err.value.clause == "out-of-domain"
    # exp(b^2/2) = e^0.125 ~ 1.133 < 1.4
    with pytest.raises(InfeasibleSError) as err:
        lb.components(1.4, 0.5)
    assert err.value.clause == "alpha-complex"
    # for large b the cosine domain s < exp(pi^2/8) ~ 3.434 binds first
    with pytest.raises(InfeasibleSError) as err:
        lb.components(3.6, 10.0)
    assert err.value.clause == "cosine-domain"
    # b = 2: ratio crosses 2 near s ~ 1.502
    with pytest.raises(InfeasibleSError) as err:
        lb.components(1.51, 2.0)
    assert err.value.clause == "a2-ratio"
    with pytest.raises(ValueError):
        lb.components(1.4, 0.0)


def test_bm_exit_pgf_values():
    comp = lb.components(1.4, 2.0)
    assert lb.pgf_bm_exit(1.0, comp) == pytest.approx(1.0, rel=1e-15)
    assert lb.pgf_bm_exit(-1.0, comp) == pytest.approx(1.0, rel=1e-15)
    assert lb.pgf_bm_exit(0.0, comp) == pytest.approx(mp_components(1.4, 2.0)["bm_exit_0"], rel=1e-13)
    assert lb.pgf_bm_exit(0.0, comp) == pytest.approx(1.4663219254502264, rel=1e-13)
    # near s = 1 the exit pgf collapses to 1
    assert lb.pgf_bm_exit(0.0, lb.components(1.0 + 1e-8, 2.0)) == pytest.approx(1.0, abs=1e-6)


def test_bm_exit_pgf_even_and_at_least_one():
    comp = lb.components(1.3, 1.1)
    for x in (0.0, 0.25, 0.5, 0.9, 0.999):
        v = lb.pgf_bm_exit(x, comp)
        assert v == lb.pgf_bm_exit(-x, comp)
        assert v >= 1.0
    assert lb.pgf_bm_exit(0.5, comp) > lb.pgf_bm_exit(0.9, comp)


def test_bm_exit_pgf_domain():
    comp = lb.components(1.4, 2.0)
    with pytest.raises(ValueError):
        lb.pgf_bm_exit(1.1, comp)


def test_geometric_half_pgf():
    assert lb.pgf_geometric_half(1.0) == pytest.approx(1.0)
    assert lb.pgf_geometric_half(1.7492) == pytest.approx(1.0 / (2.0 - 1.7492), rel=1e-15)
    assert lb.pgf_geometric_half(2.0 - 1e-9) == pytest.approx(1e9, rel=1e-6)
    with pytest.raises(ValueError):
        lb.pgf_geometric_half(2.0)


def test_drift_passage_pgf():
    comp = lb.components(1.4, 2.0)
    assert lb.pgf_drift_passage(0.0, comp) == 1.0
    assert lb.pgf_drift_passage(1.0, comp) == pytest.approx(1.1924120638227966, rel=1e-13)
    comp = lb.components(1.3, 1.1)
    assert lb.pgf_drift_passage(9.0, comp) == pytest.approx(11.584855913062101, rel=1e-13)
    with pytest.raises(ValueError):
        lb.pgf_drift_passage(-0.1, comp)


def test_bound_example_values():
    comp = lb.components(1.4, 2.0)
    assert lb.hitting_pgf_bound(2.0, comp) == pytest.approx(6.9510202318615157, rel=1e-13)
    assert lb.hitting_pgf_bound(2.0, comp) == pytest.approx(mp_bound_closed(2, 1.4, 2), rel=1e-13)
    comp = lb.components(1.3, 1.1)
    assert lb.hitting_pgf_bound(10.0, comp) == pytest.approx(62.626221491639729, rel=1e-13)
    assert lb.hitting_pgf_bound(10.0, comp) == pytest.approx(mp_bound_product(10, 1.3, 1.1), rel=1e-13)


def test_bound_rejects_y_below_one():
    comp = lb.components(1.4, 2.0)
    with pytest.raises(ValueError):
        lb.hitting_pgf_bound(0.5, comp)
    with pytest.raises(ValueError):
        lb.hitting_pgf_bound_factored(0.5, comp)


def test_bound_limit_at_s_to_one():
    comp = lb.components(1.0 + 1e-8, 2.0)
    for y in (1.0, 2.0, 10.0):
        assert lb.hitting_pgf_bound(y, comp) - 1.0 < 1e-3
        assert lb.hitting_pgf_bound(y, comp) >= 1.0


def test_bound_factored_at_y_one():
    # with no drifted approach segment, the bound is the geometric sum times one exit
    comp = lb.components(1.4, 2.0)
    direct = lb.pgf_geometric_half(
        lb.pgf_bm_exit(0.0, comp) * lb.pgf_drift_passage(1.0, comp)
    ) * lb.pgf_bm_exit(0.0, comp)
    assert lb.hitting_pgf_bound_factored(1.0, comp) == pytest.approx(direct, rel=1e-15)


def test_closed_form_equals_product_form_on_grid():
    # 75-point identity grid; this is the anti-typo certificate for the
    # b^2-under-the-radical reading of the closed form.
    checked = 0
    for b in IDENTITY_B:
        for s in _feasible_s_grid(b):
            comp = lb.components(s, b)
            for y in IDENTITY_Y:
                closed = lb.hitting_pgf_bound(y, comp)
                product = lb.hitting_pgf_bound_factored(y, comp)
                assert closed == pytest.approx(product, rel=1e-12)
                # and both match the independent high-precision assembly
                assert closed == pytest.approx(mp_bound_product(y, s, b), rel=1e-12)
                checked += 1
    assert checked == 75


def test_bound_monotone_in_y_and_s():
    comp = lb.components(1.4, 2.0)
    ys = [1.0, 1.5, 2.0, 3.0, 5.0, 10.0]
    vals = [lb.hitting_pgf_bound(y, comp) for y in ys]
    assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))
    svals = [lb.hitting_pgf_bound(2.0, lb.components(s, 2.0)) for s in _feasible_s_grid(2.0, 8)]
    assert all(v2 > v1 for v1, v2 in zip(svals, svals[1:]))


def test_feasible_s_range_contains_worked_examples():
    fr = lb.feasible_s_range(2.0)
    assert fr.s_lo == 1.0
    assert fr.s_lo < 1.4 < fr.s_hi
    assert fr.constraint_binding_at_hi is BindingConstraint.RATIO_EQUALS_TWO
    fr = lb.feasible_s_range(1.1)
    assert fr.s_lo < 1.3 < fr.s_hi


def test_feasible_s_range_binding_value():
    fr = lb.feasible_s_range(2.0)
    # re-evaluate the ratio just inside the boundary: it must sit at 2
    comp = lb.components(fr.s_hi * (1.0 - 1e-11), 2.0)
    assert comp.ratio == pytest.approx(2.0, abs=1e-9)
    assert fr.s_hi == pytest.approx(1.5021804714085722, rel=1e-10)


def test_feasible_s_range_small_floor_binds_alpha_domain():
    fr = lb.feasible_s_range(0.5)
    assert fr.constraint_binding_at_hi is BindingConstraint.ALPHA_DOMAIN
    assert fr.s_hi == pytest.approx(math.exp(0.125), rel=1e-12)
    # every s strictly inside is feasible
    lb.components(fr.s_hi * (1.0 - 1e-9), 0.5)


def test_feasible_s_range_interior_points_feasible():
    for b in (0.3, 1.1, 2.0, 5.0):
        fr = lb.feasible_s_range(b)
        for s in _feasible_s_grid(b, 7):
            lb.components(s, b)  # must not raise
        with pytest.raises(InfeasibleSError):
            lb.components(fr.s_hi * (1.0 + 1e-6), b)
