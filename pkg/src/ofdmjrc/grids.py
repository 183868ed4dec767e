"""Shared 2D sample containers passed between the synthesis and receiver stages."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class SampleGrid:
    """Slow-time by fast-time baseband samples y[m, n].

    ``sigma2`` records the variance of the complex noise actually
    injected into the grid, 0.0 for a noiseless grid.
    """

    y: np.ndarray
    sigma2: float = 0.0

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=np.complex128)
        if self.y.ndim != 2:
            raise ValueError("sample grid must be 2D (m_symbols x n_fft)")
        self.sigma2 = float(self.sigma2)

    @property
    def m_symbols(self) -> int:
        return self.y.shape[0]

    @property
    def n_fft(self) -> int:
        return self.y.shape[1]


@dataclass(eq=False)
class FreqGrid:
    """Active-subcarrier by slow-time samples after known-symbol removal."""

    y_tilde: np.ndarray

    def __post_init__(self):
        self.y_tilde = np.asarray(self.y_tilde, dtype=np.complex128)
        if self.y_tilde.ndim != 2:
            raise ValueError("frequency grid must be 2D (k_active x m_symbols)")

    @property
    def k_active(self) -> int:
        return self.y_tilde.shape[0]

    @property
    def m_symbols(self) -> int:
        return self.y_tilde.shape[1]

    def vectorized(self) -> np.ndarray:
        """Flatten to z[k + m*K]: subcarrier index fastest, symbols stacked."""
        return self.y_tilde.flatten(order="F")
