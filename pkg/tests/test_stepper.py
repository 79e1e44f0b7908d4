import numpy as np
import pytest

from avgeuler2d import stepper as st


def test_tableau_consistency():
    assert sum(st.CK_B5) == pytest.approx(1.0, abs=1e-15)
    assert sum(st.CK_B4) == pytest.approx(1.0, abs=1e-15)
    for c, row in zip(st.CK_C[1:], st.CK_A[1:]):
        assert sum(row) == pytest.approx(c, abs=1e-15)


def test_ck_step_exponential_accuracy():
    y0 = np.array([1.0])
    y1, err = st.ck_step(0.0, y0, lambda t, y: -y, 0.1)
    assert abs(y1[0] - np.exp(-0.1)) < 1e-9
    assert abs(err[0]) < 1e-7


def test_ck_step_fifth_order_convergence():
    """Halving dt should shrink the one-step error by about 2^5."""

    def rhs(t, y):
        return np.array([y[0] * np.cos(t)])

    exact = lambda t: np.exp(np.sin(t))
    errs = []
    dts = [0.2, 0.1, 0.05, 0.025]
    for dt in dts:
        y1, _ = st.ck_step(0.3, np.array([exact(0.3)]), rhs, dt)
        errs.append(abs(y1[0] - exact(0.3 + dt)))
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert 5.3 < slope < 6.3  # local error order p+1 = 6


def test_ck_step_rejects_bad_dt_and_nonfinite():
    with pytest.raises(ValueError):
        st.ck_step(0.0, np.array([1.0]), lambda t, y: -y, 0.0)
    with pytest.raises(st.DivergenceError):
        st.ck_step(0.0, np.array([1.0]), lambda t, y: y * np.nan, 0.1)


def test_error_norm():
    err = np.array([2e-9, 0.0])
    y = np.array([1.0, 1.0])
    # scale = atol + rtol*|y| = 2e-9 per entry; RMS of (1, 0)
    assert st.error_norm(err, y, y, rtol=1e-9, atol=1e-9) == pytest.approx(
        np.sqrt(0.5)
    )


def test_controller_validation():
    with pytest.raises(ValueError):
        st.StepController(min_shrink=1.5)
    with pytest.raises(ValueError):
        st.StepController(dt=-1.0)


def test_advance_exponential():
    controller = st.StepController(rtol=1e-8, atol=1e-10, dt=1e-2)
    y, log = st.advance(0.0, np.array([1.0]), lambda t, y: -y, controller, 2.0)
    assert abs(y[0] - np.exp(-2.0)) < 1e-7
    accepted = [o for o in log if o.accepted]
    assert accepted and abs(accepted[-1].t - 2.0) < 1e-12
    assert all(o.error_estimate <= 1.0 for o in accepted)


def test_advance_rejects_then_recovers():
    controller = st.StepController(rtol=1e-10, atol=1e-12, dt=1.0)
    y, log = st.advance(0.0, np.array([1.0]), lambda t, y: -10.0 * y, controller, 0.5)
    assert any(not o.accepted for o in log)
    assert abs(y[0] - np.exp(-5.0)) < 1e-8


def test_advance_requires_forward_target():
    controller = st.StepController()
    with pytest.raises(ValueError):
        st.advance(1.0, np.array([1.0]), lambda t, y: -y, controller, 1.0)


def test_advance_post_accept_is_applied():
    """post_accept is a constraint on the committed state."""
    controller = st.StepController(rtol=1e-6, atol=1e-9, dt=1e-2)

    def clamp(t, y):
        return np.minimum(y, 1.0)

    y, _ = st.advance(
        0.0, np.array([1.0]), lambda t, y: y, controller, 1.0, post_accept=clamp
    )
    assert y[0] == 1.0


def test_advance_on_accept_sees_committed_states():
    controller = st.StepController(rtol=1e-6, atol=1e-9, dt=1e-2)
    seen = []
    st.advance(
        0.0, np.array([1.0]), lambda t, y: -y, controller, 1.0,
        on_accept=lambda t, y, o: seen.append((t, float(y[0]))),
    )
    ts = [t for t, _ in seen]
    assert ts == sorted(ts) and abs(ts[-1] - 1.0) < 1e-12


def test_advance_stiffness_error_carries_state():
    controller = st.StepController(rtol=1e-12, atol=1e-14, dt=1e-3, dt_min=1e-4)
    with pytest.raises(st.StiffnessError) as exc:
        st.advance(0.0, np.array([1.0]), lambda t, y: -1e6 * y, controller, 1.0)
    assert np.all(np.isfinite(exc.value.y))
    assert 0.0 <= exc.value.t < 1.0


def test_advance_complex_state():
    controller = st.StepController(rtol=1e-9, atol=1e-12, dt=1e-2)
    y0 = np.array([1.0 + 0.0j])
    y, _ = st.advance(0.0, y0, lambda t, y: 1j * y, controller, 1.0)
    assert abs(y[0] - np.exp(1j)) < 1e-8
