import numpy as np
import pytest

from dfsim import circuits, dfs, noise, qcore, readout
from dfsim.qcore import PauliString, pauli_matrix
from dfsim.readout import (
    protected_steps,
    signal_intensity,
    theory_curve,
    unprotected_steps,
)


def test_protected_steps_sum_to_encoded_00():
    total = np.eye(16, dtype=complex) / 16
    for step in protected_steps():
        total = total + step.deviation
    np.testing.assert_allclose(
        total, dfs.encode(np.array([1, 0, 0, 0], dtype=complex)), atol=1e-14
    )


def test_step_deviations_are_traceless_diagonal_hermitian():
    for step in protected_steps() + unprotected_steps():
        dev = step.deviation
        assert abs(np.trace(dev)) < 1e-14
        assert qcore.is_hermitian(dev)
        np.testing.assert_allclose(dev, np.diag(np.diag(dev)), atol=1e-14)


def test_protected_steps_are_channel_invariant():
    for step in protected_steps():
        for e in (0.1, 0.3, 0.5):
            out = noise.apply_channel(step.deviation, noise.engineered_channel(e))
            np.testing.assert_allclose(out, step.deviation, atol=1e-14)


def test_unprotected_steps_sum_to_pseudo_pure_00():
    total = np.eye(16, dtype=complex) / 16
    for step in unprotected_steps():
        total = total + step.deviation
    # oracle: |0><0| on spins 1 and 4, fully mixed spins 2 and 3
    proj0 = np.array([[1, 0], [0, 0]], dtype=complex)
    half = np.eye(2, dtype=complex) / 2
    expected = np.kron(np.kron(np.kron(proj0, half), half), proj0)
    np.testing.assert_allclose(total, expected, atol=1e-14)


def test_unprotected_step_labels_and_order():
    assert tuple(s.label for s in unprotected_steps()) == ("Z1", "Z1Z4", "Z4")
    assert tuple(s.label for s in protected_steps()) == ("Z1Z2", "Z3Z4", "Z1Z2Z3Z4")


def test_unprotected_z1_scales_under_one_point():
    z1 = unprotected_steps()[0].deviation
    for e in (0.2, 0.5):
        out = noise.apply_channel(z1, noise.engineered_channel(e))
        np.testing.assert_allclose(out, (1 - 2 * e) * z1, atol=1e-14)


def test_signal_intensity_reference_conventions():
    ref = pauli_matrix(PauliString("ZIII")) / 16
    assert signal_intensity(ref, ref) == pytest.approx(1.0)
    assert signal_intensity(-ref, ref) == pytest.approx(-1.0)
    assert signal_intensity(0.25 * ref, ref) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        signal_intensity(ref, np.zeros((16, 16)))


def test_signal_matches_closed_form_at_quarter():
    plan = circuits.assemble_unprotected("grover", preparation=unprotected_steps()[1])
    reference = noise.run_plan_exact(plan, 0.0)
    signal = signal_intensity(noise.run_plan_exact(plan, 0.25), reference)
    assert signal == pytest.approx(0.5**12, abs=1e-12)
    assert signal == pytest.approx(2.44140625e-4, abs=1e-12)


def test_theory_curve_values():
    assert theory_curve(6, 0.0) == 1.0
    assert theory_curve(6, 0.5) == 0.0
    assert theory_curve(0, 0.37) == 1.0
    # oracle: repeated multiplication
    acc = 1.0
    for _ in range(12):
        acc *= 0.8
    assert theory_curve(12, 0.1) == pytest.approx(acc)
    assert theory_curve(12, 0.1) == pytest.approx(0.0687, abs=5e-5)


def test_theory_curve_validation():
    with pytest.raises(ValueError):
        theory_curve(-1, 0.1)
    with pytest.raises(ValueError):
        theory_curve(6, 0.6)


def test_temporal_averaging_is_linear_through_evolution():
    for mode in ("protected", "unprotected"):
        steps = readout.steps_for_mode(mode)
        plan = circuits.assemble(mode, "grover", preparation=steps[0])
        for e in (0.0, 0.1875, 0.5):
            total = sum(noise.run_plan_exact(plan, e, initial=s.deviation) for s in steps)
            combined = sum(s.deviation for s in steps)
            together = noise.run_plan_exact(plan, e, initial=combined)
            assert qcore.frobenius_norm(total - together) < 1e-12


def test_protected_signal_is_flat():
    for step in protected_steps():
        plan = circuits.assemble_protected("grover", preparation=step)
        reference = noise.run_plan_exact(plan, 0.0)
        for e in np.arange(0.0, 0.501, 0.0625):
            signal = signal_intensity(noise.run_plan_exact(plan, e), reference)
            assert signal == pytest.approx(1.0, abs=1e-10)


def test_unprotected_signal_negligible_from_03_up():
    for step in unprotected_steps():
        plan = circuits.assemble_unprotected("grover", preparation=step)
        reference = noise.run_plan_exact(plan, 0.0)
        for e in (0.3, 0.3125, 0.375, 0.4375, 0.5):
            signal = signal_intensity(noise.run_plan_exact(plan, e), reference)
            assert abs(signal) < 0.01
