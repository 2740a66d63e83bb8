import math

import numpy as np
import pytest

from pcmdelay.distributions import InputSpec
from pcmdelay.errors import BindingError, ExternalModelError
from pcmdelay.gates import GateModel
from pcmdelay.montecarlo import McConfig, compare, mc_run, pdf_gap
from pcmdelay.pce import StatReport, fit_pce

L_SPEC = InputSpec.normal("L", 0.18, 0.036)


def test_constant_model():
    r = mc_run(lambda p: np.full(len(p["L"]), 5.0), [L_SPEC], McConfig(1000, 1))
    assert r.mean == 5.0 and r.variance == 0.0


def test_identity_model_truncated_mean():
    r = mc_run(lambda p: p["L"], [L_SPEC], McConfig(10 ** 6, 2, 3.0))
    assert r.mean == pytest.approx(0.18, rel=0.005)
    assert r.std_dev == pytest.approx(0.036 * math.sqrt(0.9733), rel=0.01)


def test_truncation_effect():
    r = mc_run(lambda p: p["L"], [L_SPEC], McConfig(10 ** 5, 3, 3.0))
    xi = (r.samples - 0.18) / 0.036
    assert np.max(np.abs(xi)) <= 3 + 1e-9


def test_spec_truncation_wins():
    spec = InputSpec.normal("L", 0.0, 1.0, truncation=1.0)
    r = mc_run(lambda p: p["L"], [spec], McConfig(10 ** 4, 3, 3.0))
    assert np.max(np.abs(r.samples)) <= 1.0


def test_reproducible():
    m = GateModel("inverter", {}, {"L": "L"})
    a = mc_run(m, [L_SPEC], McConfig(10 ** 4, 7))
    b = mc_run(m, [L_SPEC], McConfig(10 ** 4, 7))
    assert a.samples.tobytes() == b.samples.tobytes()
    assert a.pdf_curve.tobytes() == b.pdf_curve.tobytes()


def test_missing_spec_for_binding():
    m = GateModel("inverter", {}, {"L": "L", "Tox": "Tox"})
    with pytest.raises(BindingError):
        mc_run(m, [L_SPEC], McConfig(1000, 1))


def test_external_failure_reports_sample():
    import sys
    m = GateModel("external", {"command": sys.executable + " -c \"import sys; sys.exit({L} > 0.2)\""},
                  {"L": "L"})
    with pytest.raises(ExternalModelError, match="sample"):
        mc_run(m, [L_SPEC], McConfig(100, 1))


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(sample_count=10)
    with pytest.raises(ValueError):
        McConfig(truncation=-1.0)


def test_oracle_equivalence_on_polynomial_model():
    # model is quadratic in xi, so a degree-2 fit is exact; stats agree within MC error
    spec = InputSpec.normal("x", 1.0, 0.5)
    model = lambda p: 3.0 + 2.0 * p["x"] + p["x"] ** 2
    pce = fit_pce(model, [spec], 2, seed=0)
    N = 10 ** 6
    pcm = pce.stats(N, 11, 3.0)
    mc = mc_run(model, [spec], McConfig(N, 12, 3.0))
    se = math.sqrt(2 * mc.variance / N)
    assert abs(pcm.mean - mc.mean) <= 4 * se


def _report(mean, sd):
    rng = np.random.default_rng(0)
    return StatReport.from_samples(mean + sd * rng.standard_normal(1000))


def test_compare_identical():
    r = _report(10.0, 1.0)
    row = compare(r, r)
    assert row.mean_err_pct == 0 and row.sd_err_pct == 0 and row.pdf_max_gap == 0


def test_compare_signed_percent_errors():
    pcm, mc = _report(65.115, 5.805), _report(65.109, 5.804)
    pcm.mean, mc.mean = 65.115, 65.109
    assert round(compare(pcm, mc).mean_err_pct, 2) == 0.01
    pcm.std_dev, mc.std_dev = 8.98, 9.28
    assert round(compare(pcm, mc).sd_err_pct, 2) == -3.23


def test_compare_zero_mean_guard():
    a, b = _report(0.0, 1.0), _report(0.0, 1.0)
    a.mean, b.mean = 0.25, 0.0
    row = compare(a, b)
    assert row.mean_err_kind == "abs" and row.mean_err_pct == 0.25


def test_pdf_gap_degenerate():
    spike = np.array([[1.0, math.inf]])
    assert pdf_gap(spike, spike)[0] == 0.0
    assert math.isinf(pdf_gap(spike, np.array([[2.0, math.inf]]))[0])
