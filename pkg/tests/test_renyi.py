import math

import numpy as np
import pytest

from tncost.renyi import (
    SchmidtSpectrum,
    SpectrumError,
    bond_lower_bound,
    bond_upper_bound,
    min_rank_for_accuracy,
    random_spectrum,
    read_spectrum,
    renyi_entropy,
)

P = SchmidtSpectrum.from_probabilities


def test_flat_spectrum():
    for m in (1, 2, 5, 64):
        s = P(np.ones(m))
        for a in (0.25, 0.5, 1, 2, 7):
            assert math.isclose(renyi_entropy(s, a), math.log(m), abs_tol=1e-12)


def test_entropy_examples():
    assert renyi_entropy(SchmidtSpectrum([1.0]), 2) == 0
    assert math.isclose(renyi_entropy(P([0.75, 0.25]), 2), math.log(8 / 5), rel_tol=1e-12)
    vn = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
    assert math.isclose(renyi_entropy(P([0.75, 0.25]), 1), vn, rel_tol=1e-12)
    # zero coefficients do not contribute
    assert math.isclose(renyi_entropy(P([0.5, 0.5, 0.0]), 1), math.log(2))
    with pytest.raises(ValueError):
        renyi_entropy(P([1.0]), 0)


def test_validation():
    with pytest.raises(SpectrumError):
        SchmidtSpectrum([0.9, 0.5])
    with pytest.raises(SpectrumError):
        SchmidtSpectrum([0.6, 0.8])
    with pytest.raises(SpectrumError):
        SchmidtSpectrum([])
    with pytest.raises(SpectrumError):
        renyi_entropy([0.9, 0.5], 2)


def test_min_rank_examples():
    assert min_rank_for_accuracy(P([0.5, 0.3, 0.2]), 0.25) == 2
    assert min_rank_for_accuracy(P([0.5, 0.3, 0.2]), 0) == 3
    assert min_rank_for_accuracy(P([0.5, 0.3, 0.2, 0, 0]), 0) == 3
    assert min_rank_for_accuracy(P(np.ones(4)), 0.3) == 3
    with pytest.raises(ValueError):
        min_rank_for_accuracy(P([1.0]), 1.0)


def test_lower_bound_examples():
    flat2 = P([1, 1])
    assert math.isclose(bond_lower_bound(flat2, 2, 0), 2)
    assert math.isclose(bond_lower_bound(flat2, 2, 0.19), 2 * 0.81 ** 2)
    assert bond_lower_bound(SchmidtSpectrum([1.0]), 3, 0.2) <= 1
    with pytest.raises(ValueError):
        bond_lower_bound(flat2, 1, 0.1)
    with pytest.raises(ValueError):
        bond_lower_bound(flat2, 2, 1)


def test_upper_bound_examples():
    assert math.isclose(bond_upper_bound(P([1, 1]), 0.5, 0.5, 2), 5)
    assert math.isclose(bond_upper_bound(P(np.ones(4)), 0.5, 0.25, 2), 17)
    single = SchmidtSpectrum([1.0])
    assert bond_upper_bound(single, 0.3, 0.1, 10) >= 2
    for bad in [(1.0, 0.1, 2), (0.5, 0, 2), (0.5, 0.1, 1), (0.5, 1.0, 2)]:
        with pytest.raises(ValueError):
            bond_upper_bound(single, *bad)


def test_adversarial_spectra():
    spectra = [
        P(np.ones(64)),
        P([0.5, 0.5]),
        P([1 - 1e-9, 1e-9]),
        P(0.5 ** np.arange(40)),
        P(0.9 ** np.arange(64)),
    ]
    for s in spectra:
        for delta in (0.01, 0.1, 0.3):
            rank = min_rank_for_accuracy(s, delta)
            for at in (1.5, 2, 4):
                assert bond_lower_bound(s, at, delta) <= rank * (1 + 1e-9)
            assert rank <= bond_upper_bound(s, 0.5, delta, 2) * (1 + 1e-9)


def test_random_spectra_are_valid():
    rng = np.random.default_rng(1)
    for _ in range(200):
        s = random_spectrum(rng)
        assert 1 <= len(s) <= 64
        assert abs(np.sum(s.lambdas ** 2) - 1) < 1e-12


def test_read_spectrum(tmp_path):
    f = tmp_path / "spec.txt"
    f.write_text("# two levels\n0.8\n\n0.6  # second\n")
    s = read_spectrum(f)
    assert np.allclose(s.lambdas, [0.8, 0.6])
    f.write_text("0.8\nabc\n")
    with pytest.raises(SpectrumError):
        read_spectrum(f)
