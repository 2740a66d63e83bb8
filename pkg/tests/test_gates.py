import sys
from itertools import product

import numpy as np
import pytest

from pcmdelay.errors import BindingError, DomainError, ExternalModelError
from pcmdelay.gates import GateModel, eval_gate, external_eval

PY = sys.executable


def inv(**binding):
    return GateModel("inverter", {"d0": 65.1}, binding or {"L": "L", "Tox": "Tox", "W": "W"})


def test_inverter_nominal():
    assert eval_gate(inv(), {"L": 0.18, "Tox": 4.0, "W": 0.54}) == pytest.approx(65.1)


def test_inverter_length_scaling():
    assert eval_gate(inv(), {"L": 1.2 * 0.18, "Tox": 4.0, "W": 0.54}) == pytest.approx(65.1 * 1.2 ** 1.3)


def test_unbound_factors_default_to_one():
    m = GateModel("inverter", {}, {"Leff": "L"})
    assert m.evaluate({"Leff": 0.18}) == pytest.approx(65.1)


def test_inverter_monotone_grid():
    m = inv()
    Ls = np.linspace(0.12, 0.24, 5)
    Ts = np.linspace(3.0, 5.0, 5)
    Ws = np.linspace(0.4, 0.7, 5)
    L, T, W = np.meshgrid(Ls, Ts, Ws, indexing="ij")
    d = m.evaluate({"L": L.ravel(), "Tox": T.ravel(), "W": W.ravel()}).reshape(L.shape)
    assert np.all(np.diff(d, axis=0) > 0)
    assert np.all(np.diff(d, axis=1) > 0)
    assert np.all(np.diff(d, axis=2) < 0)


@pytest.mark.parametrize("kind,d0", [("inverter", 65.1), ("inverter_chain", 80.6),
                                     ("nand2", 72.1), ("full_adder", 163.5)])
def test_nominal_calibration(kind, d0):
    m = GateModel(kind, {"d0": d0}, {"L": "L", "Tox": "Tox"})
    assert m.evaluate({"L": 0.18, "Tox": 4.0}) == pytest.approx(d0, rel=1e-14)


def test_chain_additivity():
    stage = GateModel("inverter", {"d0": 30.0}, {"L": "L"})
    chain = GateModel("inverter_chain", {"d0": 120.0, "stages": 4}, {"L": "L"})
    for L in (0.15, 0.18, 0.22):
        assert chain.evaluate({"L": L}) == pytest.approx(4 * stage.evaluate({"L": L}))


def test_chain_per_stage_lengths():
    chain = GateModel("inverter_chain", {"d0": 80.0, "stages": 2}, {"La": "L1", "Lb": "L2"})
    stage = GateModel("inverter", {"d0": 40.0}, {"L": "L"})
    got = chain.evaluate({"La": 0.2, "Lb": 0.16})
    assert got == pytest.approx(stage.evaluate({"L": 0.2}) + stage.evaluate({"L": 0.16}))


def test_full_adder_stage_weights():
    fa = GateModel("full_adder", {"d0": 250.0}, {"L": "L"})
    nand = GateModel("nand2", {"d0": 100.0}, {"L": "L"})
    assert fa.evaluate({"L": 0.2}) == pytest.approx(2.5 * nand.evaluate({"L": 0.2}))


def mis():
    return GateModel("nand_mis", {"d0": 100.0}, {"a": "arrA", "b": "arrB", "L": "L"})


def test_mis_equal_arrivals():
    assert mis().evaluate({"a": 7.0, "b": 7.0, "L": 0.18}) == pytest.approx(107.0)


def test_mis_kink():
    m = mis()
    h = 1e-4
    f = lambda a: m.evaluate({"a": a, "b": 5.0, "L": 0.18})
    left = (f(5.0 - h) - f(5.0 - 2 * h)) / h
    right = (f(5.0 + 2 * h) - f(5.0 + h)) / h
    assert left == pytest.approx(0.0, abs=1e-6)
    assert right == pytest.approx(1.0, abs=1e-6)


def test_mis_requires_arrivals():
    with pytest.raises(BindingError):
        GateModel("nand_mis", {}, {"L": "L"})


def test_bad_bindings():
    with pytest.raises(BindingError):
        GateModel("nand2", {}, {"W": "W"})
    with pytest.raises(BindingError):
        GateModel("inverter", {}, {"a": "L", "b": "L"})
    with pytest.raises(BindingError):
        inv().evaluate({"L": 0.18, "Tox": 4.0})


def test_domain_errors():
    with pytest.raises(DomainError):
        inv().evaluate({"L": -0.1, "Tox": 4.0, "W": 0.5})
    with pytest.raises(ValueError):
        GateModel("inverter", {"d0": 0.0}, {"L": "L"})
    with pytest.raises(ValueError):
        GateModel("inverter_chain", {"stages": 0}, {"L": "L"})
    with pytest.raises(ValueError):
        GateModel("transmission_gate", {}, {})


def test_dict_round_trip():
    m = GateModel("inverter_chain", {"d0": 80.6, "stages": 3}, {"Leff": "L"})
    again = GateModel.from_dict(m.to_dict())
    assert again == m


def test_external_identity():
    assert external_eval("echo {L}", {"L": 0.18}, 5.0) == 0.18


def test_external_uses_last_line():
    cmd = PY + " -c \"print('log line'); print({x} * 2)\""
    assert external_eval(cmd, {"x": 1.5}, 5.0) == 3.0


def test_external_nonzero_exit():
    with pytest.raises(ExternalModelError) as info:
        external_eval(PY + " -c \"import sys; print('boom'); sys.exit(3)\" {L}", {"L": 1.0}, 5.0)
    assert "boom" in info.value.output


def test_external_two_numbers():
    with pytest.raises(ExternalModelError):
        external_eval("echo 1.0 2.0 {L}", {"L": 1.0}, 5.0)


def test_external_timeout():
    with pytest.raises(ExternalModelError, match="timed out"):
        external_eval(PY + " -c \"import time; time.sleep(5)\" {L}", {"L": 1.0}, 0.2)


def test_external_missing_program():
    with pytest.raises(ExternalModelError):
        external_eval("/nonexistent/simulator {L}", {"L": 1.0}, 1.0)


def test_external_model_batch_and_sample_index():
    m = GateModel("external", {"command": PY + " -c \"print(2 * {x})\""}, {"x": "x"})
    np.testing.assert_allclose(m.evaluate({"x": np.array([1.0, 2.0, 3.0])}), [2, 4, 6])
    bad = GateModel("external", {"command": PY + " -c \"import sys; v={x}; print(v); sys.exit(v == 2)\""},
                    {"x": "x"})
    with pytest.raises(ExternalModelError) as info:
        bad.evaluate({"x": np.array([1.0, 2.0, 3.0])})
    assert info.value.sample_index == 1


def test_external_placeholders_must_be_bound():
    with pytest.raises(BindingError):
        GateModel("external", {"command": "sim {L} {Tox}"}, {"L": "L"})
