from fractions import Fraction

import pytest

import rholattice as rl


def test_ring_inverse():
    a = rl.ring("(1-x)^-1", N=4)
    assert rl.coefficients(a) == [Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)]


def test_ring_ideal_generator_vanishes():
    assert all(c == 0 for c in rl.coefficients(rl.ring("1+x+x^2+x^3", N=4)))


def test_parse_error_position():
    with pytest.raises(rl.ParseError, match="position 4"):
        rl.ring("(1+x", N=4)


def test_zero_divisor():
    with pytest.raises(rl.NotInvertible):
        rl.ring("1/(1+x)", N=4)


def test_structure_set_shape():
    s = rl.structure_set(4, 5)
    assert s["free_rank"] == 1
    assert s["torsion"]["factors"] == [2, 2, 4, 4]
    assert rl.structure_set(3, 3)["torsion"]["factors"] == []


def test_special_f():
    assert rl.coefficients(rl.special(4)["f"]) == [Fraction(1, 2), 1, Fraction(1, 2)]


def test_tau_suspension_candidates():
    tau = rl.generator("tau", 8, 4)
    assert rl.validate(tau) == ""
    assert rl.suspend(tau)["t4e_candidates"] == [2, 6]


def test_torsion_basis_round_trip():
    basis = rl.torsion_basis(8, 5)
    assert basis["orders"] == [4, 8, 2, 2]
    for j, element in enumerate(basis["mu4"] + basis["mu4m2"]):
        coords = rl.torsion_coordinates(element)
        assert coords == [1 if i == j else 0 for i in range(4)]


def test_transfer_kills_tau_suspension():
    tau = rl.generator("tau", 12, 4)
    for candidate in rl.suspend(tau)["candidates"]:
        out = rl.transfer(candidate, 3)
        assert out["coords"]["t4"] == [0, 0]


def test_minimal_exponent():
    assert [rl.minimal_exponent(n, 4) for n in (2, 4, 8, 16)] == [3, 2, 1, 0]


def test_invalid_element_rejected():
    bad = rl.generator("zero", 8, 4)
    bad["coords"]["t4"] = [1]
    assert rl.validate(bad) != ""
    with pytest.raises(rl.InvalidArgument):
        rl.suspend(bad)


def test_verify_kernel_suite():
    checks, summary = rl.verify("kernel", max_N=6, max_d=5, workers=1)
    assert summary["failed"] == 0
    assert len(checks) == summary["checks"] >= 20


def test_basis_generator_expands_to_unit_vector():
    assert rl.torsion_coordinates(rl.generator("basis:1", 8, 5)) == [0, 1, 0, 0]
    with pytest.raises(rl.InvalidArgument):
        rl.generator("basis:9", 8, 5)
