"""Position-momentum spread bound on a periodic box.

Wavefunctions are sampled on a uniform grid over [-L/2, L/2) whose first
point represents the identified boundary x = -L/2 = L/2.  Position acts by
multiplication with the grid coordinate; momentum acts spectrally through
the discrete Fourier transform with angular wavenumbers 2 pi n / L,
n in [-N/2, N/2) (Nyquist mode assigned to -N/2).  The spread product is
compared against the boundary-weighted bound

    dev(p) dev(x)  >=  (hbar/2) |1 - L |psi(boundary)|^2|,

whose right-hand side collapses to zero for plane waves and approaches
hbar/2 for states with negligible boundary amplitude.  The bound follows
from the nonnegativity of a quadratic form in a real parameter s, which is
also exposed here for direct sweeps.

Expectations use uniform-grid quadrature, so comparisons are quadrature
limited: the satisfaction tolerance is 1e-8 rather than the algebraic
1e-9 used elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .relations import RelationReport, make_report

NORMALIZATION_TOL = 1e-10
MIN_GRID = 64
CHECK36_TOL = 1e-8
GAUSSIAN_IMAGE_TAIL = 1e-14


class WavefunctionError(ValueError):
    """A sampled wavefunction violates a structural requirement."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PeriodicWavefunction:
    """Complex samples of a normalized wavefunction on the periodic grid."""

    box_length: float
    samples: np.ndarray
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.box_length <= 0:
            raise WavefunctionError(f"box length must be positive, got {self.box_length!r}")
        if self.hbar <= 0:
            raise WavefunctionError(f"hbar must be positive, got {self.hbar!r}")
        samples = np.array(self.samples, dtype=complex).reshape(-1)
        if not _is_power_of_two(samples.size) or samples.size < MIN_GRID:
            raise WavefunctionError(
                f"grid size must be a power of two >= {MIN_GRID}, got {samples.size}"
            )
        norm = float(np.sum(np.abs(samples) ** 2) * (self.box_length / samples.size))
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise WavefunctionError(
                f"discrete normalization {norm!r} deviates from 1 beyond {NORMALIZATION_TOL}"
            )
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def grid_size(self) -> int:
        return self.samples.size

    @property
    def dx(self) -> float:
        return self.box_length / self.grid_size

    @property
    def positions(self) -> np.ndarray:
        n = self.grid_size
        return -self.box_length / 2 + np.arange(n) * self.dx

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.grid_size, d=self.dx)


def momentum_apply(wave: PeriodicWavefunction) -> np.ndarray:
    """Samples of the momentum operator applied to the wavefunction."""
    spectrum = np.fft.fft(wave.samples)
    return np.fft.ifft(wave.hbar * wave.wavenumbers * spectrum)


@dataclass(frozen=True)
class Moments:
    mean_x: float
    mean_p: float
    dev_x: float
    dev_p: float


def moments(wave: PeriodicWavefunction) -> Moments:
    """Means and spreads of position and momentum by grid quadrature."""
    dx = wave.dx
    density = np.abs(wave.samples) ** 2
    x = wave.positions
    mean_x = float(np.sum(x * density) * dx)
    var_x = float(np.sum((x - mean_x) ** 2 * density) * dx)

    applied = momentum_apply(wave)
    mean_p = float(np.vdot(wave.samples, applied).real * dx)
    var_p = float(np.sum(np.abs(applied - mean_p * wave.samples) ** 2) * dx)
    return Moments(
        mean_x=mean_x,
        mean_p=mean_p,
        dev_x=float(np.sqrt(max(var_x, 0.0))),
        dev_p=float(np.sqrt(max(var_p, 0.0))),
    )


def kr_bound(wave: PeriodicWavefunction) -> float:
    """Boundary-weighted lower bound (hbar/2)|1 - L |psi(boundary)|^2|."""
    boundary_density = float(np.abs(wave.samples[0]) ** 2)
    return 0.5 * wave.hbar * abs(1.0 - wave.box_length * boundary_density)


def check36(wave: PeriodicWavefunction) -> RelationReport:
    """Spread-product report against the boundary-weighted bound."""
    m = moments(wave)
    return make_report("KR36", m.dev_p * m.dev_x, kr_bound(wave), tolerance=CHECK36_TOL)


def quadratic_form(wave: PeriodicWavefunction, s: float) -> float:
    """Quadrature of |[i s (p - <p>) + (x - <x>)] psi|^2; nonnegative in s.

    The bracket is applied to the samples as a single vector before
    integrating, so the non-periodic coordinate factor never needs its own
    spectral treatment.
    """
    m = moments(wave)
    applied = momentum_apply(wave)
    vec = 1j * float(s) * (applied - m.mean_p * wave.samples) + (
        wave.positions - m.mean_x
    ) * wave.samples
    return float(np.sum(np.abs(vec) ** 2) * wave.dx)


def quadratic_form_sweep(wave: PeriodicWavefunction, s_values) -> np.ndarray:
    """Quadratic form evaluated over a sweep of the real parameter."""
    m = moments(wave)
    applied = momentum_apply(wave)
    centered_p = applied - m.mean_p * wave.samples
    centered_x = (wave.positions - m.mean_x) * wave.samples
    out = np.empty(len(s_values), dtype=float)
    for i, s in enumerate(s_values):
        vec = 1j * float(s) * centered_p + centered_x
        out[i] = float(np.sum(np.abs(vec) ** 2) * wave.dx)
    return out


def make_plane_wave(
    mode_index: int, box_length: float, grid_size: int, hbar: float = 1.0
) -> PeriodicWavefunction:
    """Discrete momentum eigenstate exp(2 pi i n x / L) / sqrt(L)."""
    x = -box_length / 2 + np.arange(grid_size) * (box_length / grid_size)
    samples = np.exp(2j * np.pi * mode_index * x / box_length) / np.sqrt(box_length)
    return PeriodicWavefunction(box_length=box_length, samples=samples, hbar=hbar)


def make_wrapped_gaussian(
    width: float,
    center: float,
    box_length: float,
    grid_size: int,
    hbar: float = 1.0,
) -> PeriodicWavefunction:
    """Periodically wrapped Gaussian packet with analytic normalization.

    The amplitude is proportional to exp(-(x - center)^2 / (2 width^2)),
    summed over periodic images until the extra terms fall below 1e-14.
    The analytic normalization is kept on purpose: if wrapping overlap
    spoils it, the normalization check fails and the width is rejected.
    """
    if width <= 0:
        raise WavefunctionError(f"width must be positive, got {width!r}")
    if not abs(center) < box_length / 2:
        raise WavefunctionError(f"center {center!r} must lie strictly inside the box")
    x = -box_length / 2 + np.arange(grid_size) * (box_length / grid_size)
    amplitude = (np.pi * width**2) ** (-0.25)
    samples = np.zeros(grid_size, dtype=complex)
    # Enough images that the furthest one is below the tail threshold even
    # at the nearest grid point; oversized widths stop here and fail the
    # normalization check below instead of looping.
    max_images = int(np.ceil((9.0 * width + box_length) / box_length)) + 1
    for image in range(max_images + 1):
        shifts = [0.0] if image == 0 else [image * box_length, -image * box_length]
        term = np.zeros(grid_size, dtype=float)
        for shift in shifts:
            term = term + np.exp(-((x - center + shift) ** 2) / (2.0 * width**2))
        samples += amplitude * term
        if image > 0 and float(term.max()) * amplitude < GAUSSIAN_IMAGE_TAIL:
            break
    try:
        return PeriodicWavefunction(box_length=box_length, samples=samples, hbar=hbar)
    except WavefunctionError as exc:
        raise WavefunctionError(
            f"width {width!r} too large for box {box_length!r}: {exc}"
        ) from None


def make_band_limited(
    max_mode: int,
    box_length: float,
    grid_size: int,
    seed: int,
    hbar: float = 1.0,
    boundary_smooth: bool = False,
) -> PeriodicWavefunction:
    """Random superposition of modes |n| <= max_mode, exactly normalized.

    With ``boundary_smooth`` the coefficients are projected so both the
    wavefunction and its derivative vanish at the identified boundary
    point.  Such states keep every grid quadrature spectrally accurate,
    which makes refinement comparisons across grid sizes meaningful.
    """
    if max_mode < 1 or 2 * max_mode + 1 >= grid_size // 2:
        raise WavefunctionError(
            f"max mode {max_mode} incompatible with grid size {grid_size}"
        )
    rng = np.random.default_rng(seed)
    modes = np.arange(-max_mode, max_mode + 1)
    coeffs = rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size)
    if boundary_smooth:
        constraints = [
            (-1.0 + 0j) ** modes,                       # value at the boundary point
            ((-1.0 + 0j) ** modes) * (2j * np.pi * modes / box_length),  # derivative
        ]
        basis = []
        for raw in constraints:
            vec = raw.astype(complex)
            for prev in basis:
                vec = vec - prev * np.vdot(prev, vec)
            basis.append(vec / np.linalg.norm(vec))
        for prev in basis:
            coeffs = coeffs - prev * np.vdot(prev, coeffs)
    coeffs = coeffs / np.sqrt(np.sum(np.abs(coeffs) ** 2))
    x = -box_length / 2 + np.arange(grid_size) * (box_length / grid_size)
    samples = np.zeros(grid_size, dtype=complex)
    for coeff, mode in zip(coeffs, modes):
        samples += coeff * np.exp(2j * np.pi * mode * x / box_length)
    samples /= np.sqrt(box_length)
    return PeriodicWavefunction(box_length=box_length, samples=samples, hbar=hbar)


def save_wavefunction(wave: PeriodicWavefunction, path) -> None:
    """Write header (L, N, hbar) plus one re,im line per sample."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(
            f"L={format(wave.box_length, '.17g')},N={wave.grid_size},"
            f"hbar={format(wave.hbar, '.17g')}\n"
        )
        for value in wave.samples:
            handle.write(f"{format(value.real, '.17g')},{format(value.imag, '.17g')}\n")


def load_wavefunction(path) -> PeriodicWavefunction:
    """Read a wavefunction file produced by :func:`save_wavefunction`."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    if not lines:
        raise WavefunctionError("line 1: empty file, expected 'L=...,N=...' header")
    header: dict[str, str] = {}
    for item in lines[0].split(","):
        if "=" not in item:
            raise WavefunctionError(f"line 1: bad header item {item!r}")
        key, _, value = item.partition("=")
        header[key.strip()] = value.strip()
    try:
        box_length = float(header["L"])
        grid_size = int(header["N"])
    except KeyError as exc:
        raise WavefunctionError(f"line 1: header missing {exc.args[0]!r}") from None
    except ValueError as exc:
        raise WavefunctionError(f"line 1: {exc}") from None
    hbar = float(header.get("hbar", "1"))
    samples = np.zeros(grid_size, dtype=complex)
    data_lines = [line for line in lines[1:] if line.strip()]
    if len(data_lines) != grid_size:
        raise WavefunctionError(
            f"expected {grid_size} sample lines, found {len(data_lines)}"
        )
    for number, line in enumerate(data_lines, start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise WavefunctionError(f"line {number}: expected 're,im', got {line!r}")
        try:
            samples[number - 2] = float(parts[0]) + 1j * float(parts[1])
        except ValueError as exc:
            raise WavefunctionError(f"line {number}: {exc}") from None
    return PeriodicWavefunction(box_length=box_length, samples=samples, hbar=hbar)
