"""OFDM frame construction: subcarrier layout, symbol mapping, modulation.

The active subcarrier set is centered around DC with the DC bin itself
left empty, matching common WLAN-style layouts. Pilot tones carry fixed
all-ones BPSK so the receiver can divide them out without bookkeeping;
data tones carry unit-energy QPSK. Everything downstream assumes the
unitary DFT convention fixed here: forward kernel e^{-j2pi.}, inverse
kernel e^{+j2pi.}, 1/sqrt(N) on both directions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grids import SampleGrid

C_LIGHT = 299_792_458.0

QPSK_ALPHABET = np.array(
    [1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j], dtype=np.complex128
) / np.sqrt(2.0)


@dataclass(frozen=True)
class OfdmConfig:
    """Static OFDM and processing parameters for one simulation run.

    v_max_mps is the largest closing speed the narrowband assumptions are
    checked against; it also bounds the velocity handed to the detector
    templates.
    """

    n_fft: int = 64
    k_active: int = 52
    n_pilot: int = 12
    delta_f_hz: float = 312.5e3
    f_c_hz: float = 5.0e9
    m_symbols: int = 10
    zero_pad: int = 16
    peak_refine_tol: float = 1.0e-6
    v_max_mps: float = 100.0

    @property
    def f_s_hz(self) -> float:
        """Complex baseband sample rate; the FFT spans exactly one symbol."""
        return self.n_fft * self.delta_f_hz

    @property
    def t_sym_s(self) -> float:
        """Symbol duration 1/delta_f (no cyclic prefix in this model)."""
        return 1.0 / self.delta_f_hz


def build_config(**kwargs) -> OfdmConfig:
    """Construct and validate an OfdmConfig, raising ConfigurationError.

    Besides basic type/domain checks this enforces the narrowband
    operating assumption that the subcarrier spacing exceeds the largest
    expected two-way Doppler shift by at least a factor of ten.
    """
    cfg = OfdmConfig(**kwargs)
    if cfg.n_fft < 2 or (cfg.n_fft & (cfg.n_fft - 1)) != 0:
        raise ConfigurationError(f"n_fft must be a power of two >= 2, got {cfg.n_fft}")
    if not 0 < cfg.k_active <= cfg.n_fft - 1:
        raise ConfigurationError(
            f"k_active must be in [1, n_fft-1] to leave DC empty, got {cfg.k_active}"
        )
    if cfg.k_active % 2 != 0:
        raise ConfigurationError(f"k_active must be even, got {cfg.k_active}")
    if not 0 <= cfg.n_pilot <= cfg.k_active:
        raise ConfigurationError(
            f"n_pilot must be in [0, k_active], got {cfg.n_pilot}"
        )
    if cfg.delta_f_hz <= 0:
        raise ConfigurationError(f"delta_f_hz must be positive, got {cfg.delta_f_hz}")
    if cfg.f_c_hz <= 0:
        raise ConfigurationError(f"f_c_hz must be positive, got {cfg.f_c_hz}")
    if cfg.m_symbols < 2:
        raise ConfigurationError(
            f"m_symbols must be >= 2 for slow-time processing, got {cfg.m_symbols}"
        )
    if cfg.zero_pad < 1:
        raise ConfigurationError(f"zero_pad must be >= 1, got {cfg.zero_pad}")
    if not 0 < cfg.peak_refine_tol < 1:
        raise ConfigurationError(
            f"peak_refine_tol must be in (0, 1), got {cfg.peak_refine_tol}"
        )
    if cfg.v_max_mps <= 0:
        raise ConfigurationError(f"v_max_mps must be positive, got {cfg.v_max_mps}")
    max_doppler = 2.0 * cfg.v_max_mps * cfg.f_c_hz / C_LIGHT
    if cfg.delta_f_hz < 10.0 * max_doppler:
        raise ConfigurationError(
            "narrowband assumption violated: delta_f_hz must be at least "
            f"10x the worst-case two-way Doppler shift ({max_doppler:.1f} Hz "
            f"at v_max_mps={cfg.v_max_mps}), got {cfg.delta_f_hz}"
        )
    return cfg


def active_subcarriers(cfg: OfdmConfig) -> np.ndarray:
    """Signed active subcarrier indices, symmetric around the empty DC bin.

    For k_active=52 this is [-26..-1, 1..26].
    """
    half = cfg.k_active // 2
    neg = np.arange(-half, 0)
    pos = np.arange(1, half + 1)
    return np.concatenate([neg, pos]).astype(np.int64)


def pilot_positions(cfg: OfdmConfig) -> np.ndarray:
    """Positions (into the active set) of pilot tones, spread edge to edge."""
    if cfg.n_pilot == 0:
        return np.array([], dtype=np.int64)
    pos = np.round(np.linspace(0, cfg.k_active - 1, cfg.n_pilot)).astype(np.int64)
    return np.unique(pos)


def pilot_subcarriers(cfg: OfdmConfig) -> np.ndarray:
    """Signed subcarrier indices that carry pilots."""
    return active_subcarriers(cfg)[pilot_positions(cfg)]


@dataclass(frozen=True)
class FrameSymbols:
    """Transmitted frequency-domain symbols, shape [k_active, m_symbols].

    Unit modulus throughout (PSK data plus BPSK pilots), so the receiver
    can divide the frame out without reshaping the noise.
    """

    x: np.ndarray
    constellation: str = "qpsk"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.complex128)
        if x.ndim != 2:
            raise ConfigurationError(f"frame must be 2D [k, m], got shape {x.shape}")
        object.__setattr__(self, "x", x)

    @property
    def k_active(self) -> int:
        return self.x.shape[0]

    @property
    def m_symbols(self) -> int:
        return self.x.shape[1]


def generate_frame(cfg: OfdmConfig, seed) -> FrameSymbols:
    """Draw one frame: uniform QPSK data with all-ones pilots.

    seed may be an integer or a numpy Generator; the draw is a pure
    function of (cfg, seed).
    """
    rng = np.random.default_rng(seed)
    x = QPSK_ALPHABET[rng.integers(0, 4, size=(cfg.k_active, cfg.m_symbols))]
    pil = pilot_positions(cfg)
    if pil.size:
        x[pil, :] = 1.0 + 0.0j
    return FrameSymbols(x=x, constellation="qpsk")


def idft_modulate(frame: FrameSymbols, cfg: OfdmConfig) -> SampleGrid:
    """Unitary IDFT of each symbol onto the full FFT grid.

    Active bins are placed at their signed indices modulo n_fft; all
    other bins stay zero. Returns the noiseless transmit SampleGrid of
    shape [m_symbols, n_fft].
    """
    if frame.x.shape != (cfg.k_active, cfg.m_symbols):
        raise ConfigurationError(
            f"frame shape {frame.x.shape} does not match "
            f"(k_active={cfg.k_active}, m_symbols={cfg.m_symbols})"
        )
    bins = np.zeros((cfg.n_fft, cfg.m_symbols), dtype=np.complex128)
    bins[active_subcarriers(cfg) % cfg.n_fft, :] = frame.x
    return SampleGrid(y=np.fft.ifft(bins, axis=0, norm="ortho").T)


def config_fingerprint(cfg: OfdmConfig) -> str:
    """Stable short string identifying the numeric configuration."""
    parts = [
        f"n{cfg.n_fft}", f"k{cfg.k_active}", f"p{cfg.n_pilot}",
        f"df{cfg.delta_f_hz:.6g}", f"fc{cfg.f_c_hz:.6g}",
        f"m{cfg.m_symbols}", f"z{cfg.zero_pad}",
        f"t{cfg.peak_refine_tol:.3g}", f"v{cfg.v_max_mps:.6g}",
    ]
    return "-".join(parts)


def write_frame_csv(path, frame: FrameSymbols, k_idx: np.ndarray) -> None:
    """Write a frame as CSV rows k,m,re,im with a header line."""
    x = frame.x
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k,m,re,im\n")
        for ki, k in enumerate(k_idx):
            for m in range(x.shape[1]):
                val = x[ki, m]
                fh.write(f"{int(k)},{m},{float(val.real)!r},{float(val.imag)!r}\n")
