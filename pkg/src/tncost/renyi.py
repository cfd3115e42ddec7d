"""Rényi entropies of Schmidt spectra and the bond-dimension bounds they imply.

For a bipartition with Schmidt coefficients ``lambda_1 >= lambda_2 >= ...``
and weights ``p = lambda**2``, the bond dimension ``M`` needed to reach an
approximation error ``delta`` is sandwiched between

    exp(S_at) * (1 - delta) ** (at / (at - 1))                (at > 1)

and

    exp(S_a) * ((N - 1) / delta) ** (a / (1 - a)) + 1         (0 < a < 1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12
# relative slack when comparing a truncation tail against delta
TAIL_RTOL = 1e-12


class SpectrumError(ValueError):
    """Spectrum is not a valid, normalized, descending list of coefficients."""


@dataclass(frozen=True)
class SchmidtSpectrum:
    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float).ravel()
        if lam.size == 0:
            raise SpectrumError("spectrum is empty")
        if not np.all(np.isfinite(lam)):
            raise SpectrumError("spectrum contains non-finite values")
        if np.any(lam < 0):
            raise SpectrumError("Schmidt coefficients must be nonnegative")
        if np.any(np.diff(lam) > 0):
            raise SpectrumError("Schmidt coefficients must be in descending order")
        norm = float(np.sum(lam ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise SpectrumError(f"sum of squared coefficients is {norm!r}, expected 1 within {NORM_TOL}")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def from_probabilities(cls, probs: Sequence[float]) -> "SchmidtSpectrum":
        """Build from squared coefficients; sorts descending and renormalizes."""
        p = np.sort(np.asarray(probs, dtype=float).ravel())[::-1]
        if p.size == 0 or np.any(p < 0) or p.sum() <= 0:
            raise SpectrumError("weights must be nonnegative with positive sum")
        return cls(np.sqrt(p / p.sum()))

    @property
    def probabilities(self) -> np.ndarray:
        return self.lambdas ** 2

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.lambdas))

    def __len__(self):
        return self.lambdas.size


def _as_spectrum(spectrum) -> SchmidtSpectrum:
    if isinstance(spectrum, SchmidtSpectrum):
        return spectrum
    return SchmidtSpectrum(spectrum)


def renyi_entropy(spectrum, alpha: float) -> float:
    """``S_alpha = ln(sum p**alpha) / (1 - alpha)``; von Neumann entropy at ``alpha == 1``."""
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    p = _as_spectrum(spectrum).probabilities
    p = p[p > 0]
    if alpha == 1:
        return float(max(0.0, -np.sum(p * np.log(p))))
    s = math.log(float(np.sum(p ** alpha))) / (1 - alpha)
    # rounding can push a zero entropy slightly negative
    return max(0.0, s)


def min_rank_for_accuracy(spectrum, delta: float) -> int:
    """Smallest ``M`` whose discarded weight ``sum_{mu > M} p_mu`` is at most ``delta``."""
    if not 0 <= delta < 1:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    p = _as_spectrum(spectrum).probabilities
    # tails[m] = weight discarded when keeping m coefficients, summed small-to-large
    tails = np.concatenate([np.cumsum(p[::-1])[::-1], [0.0]])
    ok = np.nonzero(tails <= delta * (1 + TAIL_RTOL))[0]
    return int(ok[0])


def bond_lower_bound(spectrum, alpha_tilde: float, delta: float) -> float:
    if not alpha_tilde > 1:
        raise ValueError(f"alpha_tilde must be > 1, got {alpha_tilde}")
    if not 0 <= delta < 1:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    s = renyi_entropy(spectrum, alpha_tilde)
    return math.exp(s) * (1 - delta) ** (alpha_tilde / (alpha_tilde - 1))


def bond_upper_bound(spectrum, alpha: float, delta: float, n_sites: int) -> float:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if int(n_sites) != n_sites or n_sites < 2:
        raise ValueError(f"n_sites must be an integer >= 2, got {n_sites}")
    s = renyi_entropy(spectrum, alpha)
    return math.exp(s) * ((n_sites - 1) / delta) ** (alpha / (1 - alpha)) + 1


def read_spectrum(path) -> SchmidtSpectrum:
    """One coefficient per line; blank lines and ``#`` comments are ignored."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise SpectrumError(f"{path}:{lineno}: not a number: {line!r}") from None
    return SchmidtSpectrum(values)


def random_spectrum(rng: np.random.Generator, max_rank: int = 64) -> SchmidtSpectrum:
    """Weights ``exp(-beta * u)`` for uniform ``u``, with a random decay rate ``beta``."""
    rank = int(rng.integers(1, max_rank + 1))
    beta = rng.uniform(0, 30)
    return SchmidtSpectrum.from_probabilities(np.exp(-beta * rng.uniform(size=rank)))
