import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fvcosmo.dilaton import (
    C_CM_PER_S,
    DilatonParams,
    coupling_from_phi,
    dilaton_report,
    frw_size_report,
    is_weak_coupling,
    phi_from_coupling,
    string_length,
)
from fvcosmo.errors import InvalidParams


def test_coupling_values():
    assert coupling_from_phi(0.0) == 1.0
    assert coupling_from_phi(-10.0) == pytest.approx(4.5399929762484854e-05, rel=1e-14)
    assert coupling_from_phi(2.0 * math.pi) == pytest.approx(535.4916555247647, rel=1e-14)


def test_weak_coupling_flag():
    assert is_weak_coupling(-10.0)
    assert not is_weak_coupling(0.0)
    assert not is_weak_coupling(2.0 * math.pi)


def test_string_length_values():
    assert string_length(DilatonParams(l_p=1.0, phi=0.0)) == 1.0
    assert string_length(DilatonParams(l_p=1.0, phi=2.0 * math.pi)) == pytest.approx(
        0.04321391826377225, rel=1e-14
    )
    assert string_length(DilatonParams(l_p=3.0, phi=0.0)) == 3.0


def test_params_validation():
    with pytest.raises(InvalidParams):
        DilatonParams(l_p=0.0)
    with pytest.raises(InvalidParams):
        phi_from_coupling(0.0)


@given(alpha=st.floats(1e-6, 1e3))
def test_coupling_round_trip(alpha):
    assert coupling_from_phi(phi_from_coupling(alpha)) == pytest.approx(alpha, rel=1e-12)


@given(phi=st.floats(-10.0, 2.0 * math.pi))
def test_length_coupling_identity(phi):
    p = DilatonParams(l_p=1.0, phi=phi)
    assert p.l_p**2 / string_length(p) ** 2 == pytest.approx(
        coupling_from_phi(phi), rel=1e-12
    )


def test_monotonicity():
    phis = [-10.0, -1.0, 0.0, 1.0, 2.0 * math.pi]
    lengths = [string_length(DilatonParams(phi=p)) for p in phis]
    couplings = [coupling_from_phi(p) for p in phis]
    assert all(a > b for a, b in zip(lengths, lengths[1:]))
    assert all(a < b for a, b in zip(couplings, couplings[1:]))


def test_frw_size_report():
    rep = frw_size_report(1e-42)
    assert rep["l_p_cm"] == pytest.approx(C_CM_PER_S * 1e-42, rel=1e-15)
    # within one order of magnitude of 1e-33 cm
    assert 1e-34 < rep["l_p_cm"] < 1e-31
    assert rep["frw_size_cm"] == 1e-2
    assert rep["ratio"] > 1e20  # the quoted FRW size dwarfs the Planck length
    rep2 = frw_size_report(2e-42)
    assert rep2["l_p_cm"] == pytest.approx(2.0 * rep["l_p_cm"], rel=1e-15)
    with pytest.raises(InvalidParams):
        frw_size_report(0.0)


def test_dilaton_report_shape():
    rep = dilaton_report(DilatonParams(l_p=1.0, phi=2.0 * math.pi))
    assert rep["coupling"] == pytest.approx(535.4916555247647, rel=1e-14)
    assert rep["weak_coupling"] is False
    assert rep["string_length"] < 1.0
