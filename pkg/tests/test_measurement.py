import numpy as np
import pytest

from univmeas.errors import DimensionMismatch, NotCommuting, NegativeProbability
from univmeas.measurement import (
    Povm,
    Pvm,
    basis_pvm,
    measure,
    pinch,
    product_pvm,
    refines,
    standard_pvm,
    trivial_pvm,
    width,
)
from univmeas.quantum_state import random_state, spectral_pvm_of_power, validate_state
from univmeas.schur_weyl import isotypic_pvm

from conftest import random_hermitian, random_povm, random_unitary

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def test_width_examples():
    assert width(standard_pvm(5)) == 1
    assert width(trivial_pvm(5)) == 5
    assert width(isotypic_pvm(2, 2)) == 3


def test_width_of_plain_pvm_is_max_rank():
    iso = isotypic_pvm(4, 2)
    assert max(Pvm(iso.elements).ranks()) == 9
    assert width(Pvm(iso.elements)) == 9
    assert width(iso) == 5


def test_refines_examples():
    ok, assign = refines(standard_pvm(3), trivial_pvm(3))
    assert ok and assign == {0: 0, 1: 0, 2: 0}
    e = standard_pvm(2)
    ok, assign = refines(e, e)
    assert ok and assign == {0: 0, 1: 1}
    assert refines(basis_pvm(HADAMARD), standard_pvm(2)) == (False, None)
    with pytest.raises(DimensionMismatch):
        refines(standard_pvm(2), standard_pvm(3))


def test_refines_partial_order(rng):
    u = random_unitary(rng, 4)
    fine = basis_pvm(u)
    mid = Pvm([fine.elements[0] + fine.elements[1], fine.elements[2], fine.elements[3]])
    coarse = Pvm([mid.elements[0] + mid.elements[1], mid.elements[2]])
    assert refines(fine, mid)[0] and refines(mid, coarse)[0] and refines(fine, coarse)[0]
    assert not refines(coarse, fine)[0]
    assert not refines(mid, fine)[0]


def test_product_pvm_examples():
    e = standard_pvm(3)
    prod = product_pvm(e, e)
    assert len(prod) == 3
    for a, b in zip(prod.elements, e.elements):
        np.testing.assert_allclose(a, b)

    f = basis_pvm(random_unitary(np.random.default_rng(1), 3))
    prod = product_pvm(trivial_pvm(3), f)
    for a, b in zip(prod.elements, f.elements):
        np.testing.assert_allclose(a, b, atol=1e-15)
    assert prod.labels == tuple(f"I|{i}" for i in range(3))


def test_product_of_isotypic_and_spectral_n2():
    # sym x {0.49, 0.21, 0.09} gives three rank-one pieces, antisym meets only 0.21.
    iso = isotypic_pvm(2, 2)
    spec = spectral_pvm_of_power(validate_state(np.diag([0.7, 0.3])), 2)
    prod = product_pvm(iso, spec)
    assert len(prod) == 4
    assert prod.ranks() == [1, 1, 1, 1]
    assert prod.check() == []
    assert refines(prod, iso)[0] and refines(prod, spec)[0]


def test_product_pvm_not_commuting():
    with pytest.raises(NotCommuting) as info:
        product_pvm(standard_pvm(2), basis_pvm(HADAMARD))
    assert info.value.norm > 0.1


def test_pinch_examples(rng):
    rho = random_state(2, 3)
    np.testing.assert_allclose(pinch(standard_pvm(2), rho.mat), np.diag(np.diag(rho.mat)), atol=1e-16)
    a = random_hermitian(rng, 3)
    np.testing.assert_allclose(pinch(trivial_pvm(3), a), a)
    f = basis_pvm(random_unitary(rng, 3))
    once = pinch(f, a)
    np.testing.assert_allclose(pinch(f, once), once, atol=1e-12)


def test_pinch_properties(rng):
    for _ in range(30):
        u = random_unitary(rng, 4)
        f = Pvm([u[:, :2] @ u[:, :2].conj().T, u[:, 2:] @ u[:, 2:].conj().T])
        rho = random_state(4, int(rng.integers(1 << 30)))
        out = pinch(f, rho.mat)
        assert abs(np.trace(out) - 1) <= 1e-10
        assert np.linalg.eigvalsh(out)[0] >= -1e-9
        assert max(np.linalg.norm(out @ e - e @ out) for e in f.elements) <= 1e-8
        np.testing.assert_allclose(pinch(f, np.eye(4)), np.eye(4), atol=1e-12)
        np.testing.assert_allclose(measure(f, rho).probs, measure(f, out).probs, atol=1e-10)


def test_measure_examples():
    rho = validate_state(np.diag([0.7, 0.3]))
    np.testing.assert_allclose(measure(standard_pvm(2), rho).probs, [0.7, 0.3])
    np.testing.assert_allclose(measure(trivial_pvm(2), rho).probs, [1.0])
    np.testing.assert_allclose(measure(basis_pvm(HADAMARD), rho).probs, [0.5, 0.5])
    with pytest.raises(DimensionMismatch):
        measure(standard_pvm(3), rho)


def test_measure_negative_probability():
    with pytest.raises(NegativeProbability):
        measure(standard_pvm(2), np.diag([1.5, -0.5]))


def test_random_povm_is_valid(rng):
    m = Povm(random_povm(rng, 3, 4))
    assert m.check() == []


def test_pvm_check_flags_overlap():
    bad = Pvm([np.diag([1, 1, 0]), np.diag([0, 1, 1])])
    problems = bad.check()
    assert any("overlap" in p for p in problems)
    assert any("identity" in p for p in problems)


def test_pvm_serialization_round_trip(rng):
    f = basis_pvm(random_unitary(rng, 3), ["a", "b", "c"])
    g = Pvm.from_list(f.to_list())
    assert g.labels == f.labels
    for a, b in zip(f.elements, g.elements):
        assert np.linalg.norm(a - b) <= 1e-12


def test_pinch_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        pinch(standard_pvm(2), np.eye(3))
