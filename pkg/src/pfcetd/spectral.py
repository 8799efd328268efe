"""Discrete Fourier transforms and the diagonalised periodic operators.

Every periodic finite-difference operator used by the solver is circulant,
so the DFT diagonalises it.  A field is expanded as

    f(x_i) = sum over modes of  fhat_k * exp(2*pi*i * k.x_i / L)

and ``dft`` returns exactly those expansion coefficients (the raw transform
divided by N**dim).  With that normalisation Parseval reads

    ||f||_2**2 = L**dim * sum |fhat_k|**2 .

The negative Laplacian acts per mode as

    lap_symbol(k) = (4/h**2) * sum_axes sin(pi*k_ax/N)**2

which is well defined for every DFT index (even N included: the Nyquist
column simply lands on sin**2 = 1 and all multipliers below stay real), and
the stabilised sixth-order operator acts as

    lin_symbol = ((1 - lap_symbol)**2 + kappa) * lap_symbol .

``apply_diagonal`` multiplies in transform space and returns the real part;
for real input and the real multipliers below the imaginary residue is pure
roundoff and is checked before being discarded.  The transform backend is an
implementation detail behind the dft/idft contract, pinned by round-trip,
Parseval and stencil-equivalence tests.  No dealiasing is applied anywhere:
transforms only diagonalise circulant difference operators, while cubic
terms are formed pointwise on the grid by the scheme itself, so diagonal
application is exact for the discrete dynamics.

SymbolTable instances are immutable after construction apart from an
idempotent multiplier cache, so concurrent readers are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, RealField
from .phifunc import phi_values

__all__ = [
    "SpectralCoeffs",
    "SymbolTable",
    "dft",
    "idft",
    "build_symbols",
    "apply_diagonal",
    "lowpass",
    "signed_modes",
    "laplace_symbol",
    "OPERATOR_TAGS",
]

#: Diagonal operators understood by :func:`apply_diagonal`.
OPERATOR_TAGS = (
    "exp",        # exp(-dt * lin_symbol), the exact one-step decay
    "phi1", "G",  # first integrator weight of dt * lin_symbol
    "phi2", "G1",  # second integrator weight
    "G2",         # phi2/phi1
    "G0",         # sqrt(phi1), symmetric square root of G
    "G3",         # sqrt(phi2)
    "G4",         # sqrt(phi2/phi1)
    "G5",         # sqrt((1 - exp(-dt*lin))/dt) * lap_symbol
    "laplacian",  # -lap_symbol
    "biharmonic",  # lap_symbol**2
    "stab_lap",   # (1 - lap_symbol)**2, i.e. (I + Laplacian)**2
)


@dataclass(frozen=True)
class SpectralCoeffs:
    """DFT expansion coefficients of a grid function (complex, one per mode)."""

    spec: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, order="C", copy=True)
        if c.shape != self.spec.shape:
            raise ValueError(f"coeffs have shape {c.shape}, expected {self.spec.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)


def dft(f: RealField) -> SpectralCoeffs:
    """Expansion coefficients of f (forward transform over N**dim)."""
    return SpectralCoeffs(f.spec, np.fft.fftn(f.values) / f.spec.size)


def idft(c: SpectralCoeffs) -> RealField:
    """Synthesise the field from expansion coefficients (real part)."""
    w = np.fft.ifftn(c.coeffs) * c.spec.size
    return RealField(c.spec, w.real)


def signed_modes(spec: GridSpec) -> tuple[np.ndarray, ...]:
    """Signed integer mode index along each axis, broadcastable to spec.shape."""
    k = np.rint(np.fft.fftfreq(spec.n) * spec.n).astype(np.int64)
    out = []
    for ax in range(spec.dim):
        shape = [1] * spec.dim
        shape[ax] = spec.n
        out.append(k.reshape(shape))
    return tuple(out)


def laplace_symbol(spec: GridSpec) -> np.ndarray:
    """Per-mode eigenvalue of the negative Laplacian stencil (nonnegative)."""
    s = np.sin(np.pi * np.arange(spec.n) / spec.n) ** 2
    out = np.zeros(spec.shape)
    for ax in range(spec.dim):
        shape = [1] * spec.dim
        shape[ax] = spec.n
        out = out + s.reshape(shape)
    return 4.0 / spec.h**2 * out


@dataclass
class SymbolTable:
    """Per-mode eigenvalues of the diagonalised operators for one (kappa, dt).

    ``lap_eigs`` are the eigenvalues of the negative Laplacian and
    ``lin_eigs`` those of the stabilised linear operator; both vanish at the
    zero mode.  ``multiplier`` builds (and caches) the diagonal multiplier
    for any tag in :data:`OPERATOR_TAGS`; the cache writes are idempotent,
    so concurrent readers at worst recompute.
    """

    spec: GridSpec
    kappa: float
    dt: float
    lap_eigs: np.ndarray
    lin_eigs: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def _weights(self):
        if "weights" not in self._cache:
            self._cache["weights"] = phi_values(self.dt * self.lin_eigs)
        return self._cache["weights"]

    def multiplier(self, which: str) -> np.ndarray:
        if which in self._cache:
            return self._cache[which]
        lap = self.lap_eigs
        if which == "exp":
            m = np.exp(-self.dt * self.lin_eigs)
        elif which in ("phi1", "G"):
            m = self._weights()[1]
        elif which in ("phi2", "G1"):
            m = self._weights()[2]
        elif which == "G2":
            _, p1, p2 = self._weights()
            m = p2 / p1
        elif which == "G0":
            m = np.sqrt(self._weights()[1])
        elif which == "G3":
            m = np.sqrt(self._weights()[2])
        elif which == "G4":
            _, p1, p2 = self._weights()
            m = np.sqrt(p2 / p1)
        elif which == "G5":
            # (1 - exp(-dt*lin))/dt == lin * phi1(dt*lin), exact and stable
            m = np.sqrt(self.lin_eigs * self._weights()[1]) * lap
        elif which == "laplacian":
            m = -lap
        elif which == "biharmonic":
            m = lap**2
        elif which == "stab_lap":
            m = (1.0 - lap) ** 2
        else:
            raise ValueError(
                f"unknown operator tag {which!r}; expected one of {OPERATOR_TAGS}"
            )
        m = np.asarray(m)
        m.flags.writeable = False
        self._cache[which] = m
        return m


def build_symbols(spec: GridSpec, kappa: float, dt: float) -> SymbolTable:
    """Eigenvalue tables for stabilisation strength kappa and step size dt."""
    if not np.isfinite(kappa) or kappa < 0:
        raise ValueError(f"kappa must be nonnegative, got {kappa}")
    if not np.isfinite(dt) or dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    lap = laplace_symbol(spec)
    lin = ((1.0 - lap) ** 2 + kappa) * lap
    lap.flags.writeable = False
    lin.flags.writeable = False
    return SymbolTable(spec=spec, kappa=float(kappa), dt=float(dt),
                       lap_eigs=lap, lin_eigs=lin)


def apply_diagonal(f: RealField, table: SymbolTable, which: str) -> RealField:
    """Apply one diagonal operator: idft(multiplier * dft(f)).

    The imaginary residue of the synthesis must stay below
    1e-12 * ||output||_inf up to a small roundoff floor tied to the input
    magnitude; anything larger indicates a non-real multiplier and raises.
    """
    if f.spec != table.spec:
        raise ValueError("field and symbol table live on different grids")
    m = table.multiplier(which)
    w = np.fft.ifftn(m * np.fft.fftn(f.values))
    out = w.real
    residue = float(np.max(np.abs(w.imag)))
    out_scale = float(np.max(np.abs(out)))
    in_scale = float(np.max(np.abs(f.values))) * max(1.0, float(np.max(np.abs(m))))
    floor = 64.0 * np.finfo(np.float64).eps * in_scale
    if residue > max(1e-12 * out_scale, floor):
        raise ValueError(
            f"imaginary residue {residue:.3e} too large for operator {which!r}"
        )
    return RealField(f.spec, out)


def lowpass(f: RealField, cutoff: int) -> RealField:
    """Zero every mode with any axis index exceeding cutoff in magnitude.

    A projection: applying it twice equals applying it once, and the mean
    (zero mode) always survives.
    """
    if cutoff < 0 or cutoff > f.spec.n // 2:
        raise ValueError(f"cutoff must be in [0, {f.spec.n // 2}], got {cutoff}")
    keep = np.ones(f.spec.shape, dtype=bool)
    for k in signed_modes(f.spec):
        keep &= np.abs(k) <= cutoff
    c = np.fft.fftn(f.values)
    c[~keep] = 0.0
    return RealField(f.spec, np.fft.ifftn(c).real)
