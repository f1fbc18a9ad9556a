import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wipass.units import (
    DB,
    DBm,
    SPEED_OF_LIGHT,
    db_to_linear,
    dbm_to_watts,
    linear_to_db,
    watts_to_dbm,
    wavelength,
)


@pytest.mark.parametrize("dbm, watts", [(0.0, 1e-3), (30.0, 1.0), (-90.0, 1e-12)])
def test_dbm_to_watts(dbm, watts):
    assert dbm_to_watts(dbm) == pytest.approx(watts, rel=1e-12)


@pytest.mark.parametrize("db, lin", [(0.0, 1.0), (-85.0, 10 ** -8.5), (10.0, 10.0)])
def test_db_to_linear(db, lin):
    assert db_to_linear(db) == pytest.approx(lin, rel=1e-12)


def test_fd_si_level_value():
    assert db_to_linear(-85.0) == pytest.approx(3.162e-9, rel=1e-3)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError):
        dbm_to_watts(bad)
    with pytest.raises(ValueError):
        db_to_linear(bad)


def test_wavelength():
    assert wavelength(28e9) == pytest.approx(0.01070687, abs=5e-9)
    assert wavelength(1e9) == pytest.approx(0.299792458, rel=1e-12)
    assert wavelength(SPEED_OF_LIGHT) == 1.0
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            wavelength(bad)


@given(st.floats(min_value=1e-15, max_value=1e6))
def test_round_trip(x):
    assert db_to_linear(linear_to_db(x)) == pytest.approx(x, rel=1e-12)


@given(st.floats(min_value=-150, max_value=60))
def test_plus_ten_db_is_times_ten(p):
    assert dbm_to_watts(p + 10.0) == pytest.approx(10.0 * dbm_to_watts(p), rel=1e-12)


def test_watts_to_dbm_inverse():
    assert watts_to_dbm(1.0) == pytest.approx(30.0)
    with pytest.raises(ValueError):
        watts_to_dbm(0.0)


def test_db_dbm_algebra():
    assert DBm(20.0) + DB(-85.0) == DBm(-65.0)
    assert DB(3.0) + DBm(10.0) == DBm(13.0)
    assert DBm(20.0) - DBm(-90.0) == DB(110.0)
    assert DB(3.0) + DB(4.0) == DB(7.0)
    with pytest.raises(TypeError):
        DBm(0.0) + DBm(0.0)
    assert DBm(30.0).watts() == pytest.approx(1.0)
    assert DB(10.0).linear() == pytest.approx(10.0)
