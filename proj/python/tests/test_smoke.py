import math

import pytest

import singtrace as st


def test_zeta_of_harmonic_spectrum():
    x = st.Profile.generate("harmonic")
    value, error = st.zeta_value(x, 2.0)
    assert value == pytest.approx(math.pi**2 / 6, rel=1e-10)
    assert error >= 0.0


def test_profile_from_values_and_errors():
    x = st.Profile.from_values([3.0, 2.0, 1.0])
    assert st.zeta_value(x, 1.0)[0] == pytest.approx(6.0)
    with pytest.raises(st.SingtraceError) as info:
        st.Profile.from_values([1.0, 2.0])
    assert info.value.code == "non_monotone"
    assert info.value.index == 2


def test_limits_and_norms():
    x = st.Profile.generate("harmonic")
    d = st.dixmier(x)
    assert d["converged"]
    assert d["value"] == pytest.approx(1.0, abs=1e-3)
    assert st.z1_seminorm(x) == pytest.approx(1.0, abs=1e-3)
    assert st.marcinkiewicz_norm(x)["value"] == pytest.approx(1 / math.log(2), rel=1e-9)
    assert st.small_ideal_constant(x)["value"] == pytest.approx(1.0)
    assert st.gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)


def test_oscillating_member_has_a_band():
    d = st.dixmier(st.Profile.generate("oscillating"))
    assert not d["converged"]
    assert d["value"] is None
    assert d["limsup"] - d["liminf"] == pytest.approx(math.sqrt(2), rel=0.1)


def test_cli_round_trip():
    report = st.analyze("gen:counterexample_x:2:30", quantities=("zp", "quasinorm"), p=2)
    assert report["verdicts"]["separation"]["pass"]
    code, out, err = st.run(["analyze", "missing.json"])
    assert code == 2
    assert "io" in err
    assert st.check("galois")["pass"]
