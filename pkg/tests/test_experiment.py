import json
import math

import numpy as np
import pytest

from univmeas.divergence import measured_divergence, quantum_relative_entropy
from univmeas.errors import UnivMeasError
from univmeas.experiment import (
    SweepConfig,
    check_sandwich_bound,
    plot_script,
    read_records_csv,
    records_to_csv,
    records_to_json,
    run_sweep,
    uniformity_sweep,
    universal_pvm,
    write_records,
)
from univmeas.measurement import basis_pvm, pinch, refines, standard_pvm
from univmeas.quantum_state import (
    random_state,
    spectral_pvm,
    spectral_pvm_of_power,
    tensor_power,
    validate_state,
)
from univmeas.schur_weyl import isotypic_pvm

from conftest import random_unitary


def same_pinching(p, q, dim, rng, tol=1e-8):
    for _ in range(10):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        assert np.linalg.norm(pinch(p, a) - pinch(q, a)) <= tol


def test_universal_pvm_degenerate_rho_is_isotypic(rng):
    m = universal_pvm(validate_state(np.eye(2) / 2), 2)
    iso = isotypic_pvm(2, 2)
    assert len(m) == len(iso)
    same_pinching(m, iso, 4, rng)


def test_universal_pvm_n2_outcomes():
    m = universal_pvm(validate_state(np.diag([0.7, 0.3])), 2)
    assert len(m) == 4
    assert m.ranks() == [1, 1, 1, 1]
    assert m.check() == []


def test_universal_pvm_single_copy(rng):
    rho = random_state(3, 9)
    same_pinching(universal_pvm(rho, 1), spectral_pvm(rho), 3, rng)


@pytest.mark.parametrize("k,n", [(2, 4), (3, 3)])
def test_universal_pvm_refines_both_factors(k, n):
    rho = random_state(k, 21)
    m = universal_pvm(rho, n)
    assert m.check() == []
    assert refines(m, isotypic_pvm(n, k))[0]
    assert refines(m, spectral_pvm_of_power(rho, n))[0]


def test_sweep_identical_states():
    for r in run_sweep(SweepConfig("diag:0.6,0.4", "diag:0.6,0.4", n_max=5)):
        assert r.target == 0 and r.gap == 0 and r.measured_rate == 0


@pytest.mark.parametrize("rho,sigma", [("diag:0.6,0.4", "diag:0.9,0.1"), ("diag:0.5,0.3,0.2", "diag:0.2,0.3,0.5")])
def test_sweep_commuting_gap_zero(rho, sigma):
    recs = run_sweep(SweepConfig(rho, sigma))
    assert [r.n for r in recs] == list(range(1, recs[-1].n + 1))
    for r in recs:
        assert abs(r.gap) <= 1e-9
        assert r.pinched_rate == pytest.approx(r.target, abs=1e-9)


def test_sweep_commuting_but_degenerate_rho_keeps_a_gap():
    # sigma is not flat on rho's degenerate eigenspace, so a rank-2 outcome hides information.
    recs = run_sweep(SweepConfig("diag:0.5,0.25,0.25", "diag:0.2,0.3,0.5", n_max=3))
    assert recs[0].gap > 0.02
    assert all(r.violations() == [] for r in recs)
    recs = run_sweep(SweepConfig("diag:0.5,0.5", "diag:0.7,0.3", n_max=4))
    assert recs[0].gap == pytest.approx(recs[0].target)
    assert all(r.violations() == [] for r in recs)


def test_sweep_example_pair():
    recs = run_sweep(SweepConfig("diag:0.6,0.4", "bloch:0.5,0,0.2", n_max=8))
    assert len(recs) == 8
    assert recs[-1].bound == pytest.approx(math.log(9) / 8, abs=1e-15)
    assert math.log(9) / 8 == pytest.approx(0.274653, abs=1e-6)
    for r in recs:
        assert r.violations() == []
        assert 0 <= r.gap <= math.log(r.n + 1) / r.n + 1e-8
    gaps = [r.gap for r in recs]
    assert all(b <= a + 1e-9 for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < gaps[0]


def test_sweep_first_record_is_spectral_measurement():
    rho, sigma = random_state(2, 1), random_state(2, 2)
    rec = run_sweep(SweepConfig(rho, sigma, n_max=1))[0]
    assert rec.measured_rate == pytest.approx(measured_divergence(spectral_pvm(rho), sigma, rho), abs=1e-12)


def test_sweep_qutrit_default_range():
    recs = run_sweep(SweepConfig("random:3", "random:3", seed=5))
    assert [r.n for r in recs] == [1, 2, 3, 4, 5]
    for r in recs:
        assert r.violations() == []
        assert r.gap <= 2 * math.log(r.n + 1) / r.n + 1e-8


def test_sweep_deterministic():
    cfg = dict(rho="random:2", sigma="random:2", seed=3, n_max=6)
    a = records_to_csv(run_sweep(SweepConfig(**cfg)))
    b = records_to_csv(run_sweep(SweepConfig(**cfg)))
    assert a == b


def test_sweep_support_violation_is_non_finite():
    recs = run_sweep(SweepConfig("diag:1,0", "diag:0.5,0.5", n_max=3))
    assert all(not r.finite and r.target == math.inf for r in recs)
    assert all(r.violations() == [] for r in recs)
    assert "inf" in records_to_csv(recs)


def test_sweep_config_validation():
    with pytest.raises(UnivMeasError):
        SweepConfig("diag:0.5,0.5", "diag:0.2,0.3,0.5").resolve()
    with pytest.raises(UnivMeasError):
        SweepConfig("diag:0.5,0.5", "diag:0.5,0.5", n_min=0).resolve()
    with pytest.raises(UnivMeasError):
        SweepConfig("diag:0.5,0.5", "diag:0.5,0.5", n_max=13).resolve()


def test_records_round_trip(tmp_path):
    recs = run_sweep(SweepConfig("diag:0.6,0.4", "bloch:0.5,0,0.2", n_max=4))
    path = tmp_path / "s.csv"
    write_records(recs, path)
    back = read_records_csv(path)
    for a, b in zip(recs, back):
        assert (a.n, a.target, a.measured_rate, a.pinched_rate, a.gap, a.bound, a.outcome_count) == (
            b.n, b.target, b.measured_rate, b.pinched_rate, b.gap, b.bound, b.outcome_count
        )
    rows = json.loads(records_to_json(recs))
    assert rows[0].keys() == {"n", "target_nats", "measured_rate", "pinched_rate", "gap", "bound", "outcomes"}
    assert "sweep.csv" in plot_script("sweep.csv")


def test_uniformity_sweep():
    rows = uniformity_sweep(validate_state(np.diag([0.6, 0.4])), [1, 3, 5], num_sigma=15)
    for n, worst, bound in rows:
        assert 0 <= worst <= bound + 1e-8


def test_sandwich_common_eigenbasis():
    e = standard_pvm(3)
    sigma = validate_state(np.diag([0.2, 0.3, 0.5]))
    rho = validate_state(np.diag([0.6, 0.3, 0.1]))
    rep = check_sandwich_bound(e, e, sigma, rho)
    assert rep.passed
    assert rep.measured == pytest.approx(rep.divergence, abs=1e-12)
    assert rep.log_width == 0


@pytest.mark.parametrize("n", [2, 3])
def test_sandwich_main_instance(n):
    for s in range(5):
        rho_1, sigma_1 = random_state(2, 10 + s), random_state(2, 20 + s)
        iso = isotypic_pvm(n, 2)
        f = universal_pvm(rho_1, n)
        rep = check_sandwich_bound(iso, f, tensor_power(sigma_1, n), tensor_power(rho_1, n))
        assert rep.hypotheses_ok, rep.hypothesis_failures
        assert rep.passed
        assert rep.log_width == pytest.approx(math.log(max(iso.gl_dims)))


def test_sandwich_flags_hypothesis_failure(rng):
    e = basis_pvm(random_unitary(rng, 2))
    sigma = validate_state(np.diag([0.7, 0.3]))
    rep = check_sandwich_bound(e, e, sigma, sigma)
    assert not rep.hypotheses_ok
    assert any("sigma" in f for f in rep.hypothesis_failures)
    assert rep.lower_ok and rep.upper_ok
    assert not rep.passed
