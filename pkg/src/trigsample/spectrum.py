"""Frequency sets (spectra) of trigonometric polynomials."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SpectrumTooLargeError

MAX_SPECTRUM_SIZE = 100_000


@dataclass(frozen=True)
class Spectrum:
    """A finite set of integer frequency vectors in ``dim`` dimensions.

    Frequencies are kept in lexicographic order; that order fixes the column
    index of every matrix built from the spectrum.
    """

    dim: int
    freqs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        freqs = tuple(tuple(int(c) for c in k) for k in self.freqs)
        if not freqs:
            raise ValueError("spectrum must contain at least one frequency")
        if any(len(k) != self.dim for k in freqs):
            raise ValueError(f"all frequencies must have length {self.dim}")
        if len(set(freqs)) != len(freqs):
            raise ValueError("duplicate frequencies in spectrum")
        object.__setattr__(self, "freqs", tuple(sorted(freqs)))

    @property
    def size(self) -> int:
        return len(self.freqs)

    D = size

    def array(self) -> np.ndarray:
        """Frequencies as an integer array of shape (D, dim)."""
        return np.array(self.freqs, dtype=np.int64).reshape(self.size, self.dim)

    def shifted(self, k0) -> Spectrum:
        k0 = tuple(int(c) for c in k0)
        return Spectrum(self.dim, tuple(tuple(a + b for a, b in zip(k, k0)) for k in self.freqs))

    def to_dict(self) -> dict:
        return {"dim": self.dim, "freqs": [list(k) for k in self.freqs]}

    @classmethod
    def from_dict(cls, data: dict) -> Spectrum:
        return cls(int(data["dim"]), tuple(tuple(k) for k in data["freqs"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Spectrum:
        return cls.from_dict(json.loads(text))


def cube_spectrum(m: int, d: int, limit: int = MAX_SPECTRUM_SIZE) -> Spectrum:
    """All frequencies with max-norm at most ``m``: {-m, ..., m}^d."""
    if m < 0 or d < 1:
        raise ValueError("need m >= 0 and d >= 1")
    size = (2 * m + 1) ** d
    if size > limit:
        raise SpectrumTooLargeError(f"spectrum too large: (2*{m}+1)^{d} = {size} > {limit}")
    side = range(-m, m + 1)
    return Spectrum(d, tuple(itertools.product(side, repeat=d)))


def line_spectrum(D: int, start: int = 0) -> Spectrum:
    """One-dimensional spectrum {start, ..., start + D - 1}."""
    if D < 1:
        raise ValueError("D must be positive")
    if D > MAX_SPECTRUM_SIZE:
        raise SpectrumTooLargeError(f"spectrum too large: {D}")
    return Spectrum(1, tuple((k,) for k in range(start, start + D)))


def is_symmetric(s: Spectrum) -> bool:
    """True iff k in the spectrum implies -k in the spectrum."""
    members = set(s.freqs)
    return all(tuple(-c for c in k) in members for k in members)


def parse_spectrum(spec: str) -> Spectrum:
    """Parse ``cube:m:d``, ``line:D`` or a path to a spectrum JSON file."""
    parts = spec.split(":")
    if parts[0] == "cube" and len(parts) == 3:
        return cube_spectrum(int(parts[1]), int(parts[2]))
    if parts[0] == "line" and len(parts) == 2:
        return line_spectrum(int(parts[1]))
    path = Path(spec)
    if path.exists():
        return Spectrum.from_json(path.read_text())
    raise ValueError(f"cannot parse spectrum {spec!r}; use cube:m:d, line:D or a JSON file")
