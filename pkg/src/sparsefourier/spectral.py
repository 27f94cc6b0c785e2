"""Discrete Fourier transforms and the partial-observation operator.

Convention: ``dft`` computes fhat(k) = sum_t f(t) exp(-i w_k t) with
w_k = 2 pi k / N, and ``idft`` inverts with the 1/N factor.  Transforms run
in O(N log N) for every length, prime lengths included (the backing FFT
combines mixed-radix stages with Bluestein's chirp algorithm for large prime
factors); tests pin the convention against direct summation.

``PartialFourierOp`` bundles a length with an observed frequency set and
provides the forward observation map, and ``project_onto_data`` is the
Euclidean projection onto the affine set {h : hhat restricted to the observed
frequencies equals the data} - one forward and one inverse transform.

``restricted_matrix`` materializes the minor of the DFT matrix mapping
signals supported on T to their coefficients on a frequency set, and
``injectivity_report`` gives its extreme singular values and a rank verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signals import Image2D, IndexSet, Signal1D

__all__ = [
    "PartialFourierOp",
    "RestrictedMatrix",
    "dft",
    "idft",
    "dft2",
    "idft2",
    "observe",
    "project_onto_data",
    "restricted_matrix",
    "injectivity_report",
    "observe_image",
    "project_image_onto_data",
]

INJECTIVITY_RTOL = 1e-10


def dft(f: Signal1D) -> Signal1D:
    return Signal1D(f.n, np.fft.fft(f.values))


def idft(fhat: Signal1D) -> Signal1D:
    return Signal1D(fhat.n, np.fft.ifft(fhat.values))


def dft2(img: Image2D) -> Image2D:
    return Image2D(img.side, np.fft.fft2(img.values))


def idft2(img: Image2D) -> Image2D:
    return Image2D(img.side, np.fft.ifft2(img.values))


@dataclass(frozen=True)
class PartialFourierOp:
    """Observation operator f -> fhat restricted to ``omega``."""

    n: int
    omega: IndexSet

    def __post_init__(self):
        if self.omega.n != self.n:
            raise ValueError(
                f"frequency set lives in [0, {self.omega.n}) but operator length is {self.n}"
            )

    def __len__(self) -> int:
        return len(self.omega)


def observe(op: PartialFourierOp, f: Signal1D) -> np.ndarray:
    """Observed coefficients (fhat(w))_{w in omega}, in increasing frequency order."""
    if f.n != op.n:
        raise ValueError(f"signal length {f.n} does not match operator length {op.n}")
    return np.fft.fft(f.values)[op.omega.indices]


def project_onto_data(op: PartialFourierOp, g: Signal1D, data: np.ndarray) -> Signal1D:
    """Euclidean projection of ``g`` onto {h : hhat on omega equals data}.

    Transforms, overwrites the observed bins, inverts.  Idempotent, and exact
    feasibility of the result is limited only by round-off.
    """
    data = np.asarray(data, dtype=np.complex128)
    if data.shape != (len(op.omega),):
        raise ValueError(
            f"expected {len(op.omega)} observed values, got shape {data.shape}"
        )
    if g.n != op.n:
        raise ValueError(f"signal length {g.n} does not match operator length {op.n}")
    spectrum = np.fft.fft(g.values)
    spectrum[op.omega.indices] = data
    return Signal1D(op.n, np.fft.ifft(spectrum))


@dataclass(frozen=True)
class RestrictedMatrix:
    """Dense minor F with F[k, t] = exp(-i w_k t), rows on omega, columns on T."""

    t_set: IndexSet
    omega: IndexSet
    entries: np.ndarray = field(compare=False)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def restricted_matrix(t_set: IndexSet, omega: IndexSet) -> RestrictedMatrix:
    if t_set.n != omega.n:
        raise ValueError(
            f"support and frequency sets have different ambient sizes "
            f"({t_set.n} vs {omega.n})"
        )
    n = t_set.n
    w = 2.0 * np.pi * omega.indices[:, np.newaxis] / n
    entries = np.exp(-1j * w * t_set.indices[np.newaxis, :])
    entries = entries.reshape(len(omega), len(t_set))
    return RestrictedMatrix(t_set, omega, entries)


def injectivity_report(m: RestrictedMatrix) -> tuple[bool, float, float]:
    """(is_injective, sigma_min, sigma_max) of the restricted minor.

    Injective means sigma_min > 1e-10 * sigma_max.
    """
    if m.cols < 1:
        raise ValueError("injectivity is undefined for a matrix with no columns")
    if m.rows == 0:
        return False, 0.0, 0.0
    sv = np.linalg.svd(m.entries, compute_uv=False)
    sigma_max = float(sv[0])
    sigma_min = float(sv[-1]) if m.rows >= m.cols else 0.0
    return sigma_min > INJECTIVITY_RTOL * sigma_max, sigma_min, sigma_max


# -- 2D observation helpers (row-major frequency indexing) -------------------


def observe_image(mask: IndexSet, img: Image2D) -> np.ndarray:
    """Observed 2D coefficients at ``mask`` indices (row-major over the grid)."""
    if mask.n != img.side * img.side:
        raise ValueError(
            f"mask ambient size {mask.n} does not match grid {img.side}x{img.side}"
        )
    return np.fft.fft2(img.values).reshape(-1)[mask.indices]


def project_image_onto_data(mask: IndexSet, img: Image2D, data: np.ndarray) -> Image2D:
    """2D analogue of ``project_onto_data`` (two 2D transforms)."""
    data = np.asarray(data, dtype=np.complex128)
    if data.shape != (len(mask),):
        raise ValueError(f"expected {len(mask)} observed values, got {data.shape}")
    if mask.n != img.side * img.side:
        raise ValueError(
            f"mask ambient size {mask.n} does not match grid {img.side}x{img.side}"
        )
    spectrum = np.fft.fft2(img.values).reshape(-1)
    spectrum[mask.indices] = data
    return Image2D(img.side, np.fft.ifft2(spectrum.reshape(img.side, img.side)))
