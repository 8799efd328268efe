"""Periodic uniform grids and the finite-difference calculus built on them.

A scalar field lives at the cell centers ``x_i = i*h`` of a periodic cube
``(0, L)^dim`` with ``h = L/N``.  Values are stored as a C-ordered ndarray of
shape ``(N,)*dim`` with axis 0 = x, axis 1 = y (and axis 2 = z in 3-D): the
last axis varies fastest when the array is flattened row-major, and every
binary file written by this package uses exactly that flat order.

Forward differences are evaluated halfway between neighbouring centers, so
the gradient of a scalar field is a staggered vector field whose component
along an axis sits at a half-integer offset on that axis only.  Divergence
maps staggered fields back to cell centers, and their composition is the
standard ``(2*dim+1)``-point Laplacian.

All indexing wraps modulo N on every axis.  Fields are immutable after
construction and the operations below are pure functions, so they are safe
to call concurrently; reductions use numpy's deterministic pairwise
summation over the fixed storage order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridSpec",
    "RealField",
    "StaggeredField",
    "FieldNorms",
    "mean",
    "inner",
    "norms",
    "grad",
    "divergence",
    "laplacian",
    "staggered_inner",
    "random_field",
]


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a periodic uniform grid.

    Attributes:
        dim: spatial dimension, 2 or 3.
        n: grid points per axis (at least 4).
        length: edge length L of the periodic cube.
        h: mesh size L/N, stored once so every operator uses the same value.
        volume: measure of the domain, L**dim.
    """

    dim: int
    n: int
    length: float
    h: float = 0.0
    volume: float = 0.0

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 4:
            raise ValueError(f"n must be at least 4, got {self.n}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ValueError(f"length must be positive and finite, got {self.length}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "h", self.length / self.n)
        object.__setattr__(self, "volume", float(self.length) ** self.dim)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        """Total number of grid points, N**dim."""
        return self.n**self.dim

    def coordinates(self, axis: int) -> np.ndarray:
        """Cell-center coordinates i*h along one axis."""
        return self.h * np.arange(self.n)


def _as_values(spec: GridSpec, values) -> np.ndarray:
    out = np.array(values, dtype=np.float64, order="C", copy=True)
    if out.shape != spec.shape:
        raise ValueError(f"values have shape {out.shape}, expected {spec.shape}")
    if not np.isfinite(out).all():
        raise ValueError("field values must be finite")
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class RealField:
    """Real scalar grid function on a periodic grid.

    The backing array is copied on construction, checked to be finite and
    frozen read-only, so a field never changes after it is created.
    """

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.spec, self.values))

    @classmethod
    def constant(cls, spec: GridSpec, value: float) -> "RealField":
        return cls(spec, np.full(spec.shape, float(value)))

    @classmethod
    def zeros(cls, spec: GridSpec) -> "RealField":
        return cls(spec, np.zeros(spec.shape))

    def __add__(self, other: "RealField") -> "RealField":
        _check_same_spec(self, other)
        return RealField(self.spec, self.values + other.values)

    def __sub__(self, other: "RealField") -> "RealField":
        _check_same_spec(self, other)
        return RealField(self.spec, self.values - other.values)

    def __neg__(self) -> "RealField":
        return RealField(self.spec, -self.values)

    def __mul__(self, scalar: float) -> "RealField":
        return RealField(self.spec, self.values * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class StaggeredField:
    """Vector grid function with one component per axis.

    ``components[ax]`` holds the values at points shifted by +h/2 along axis
    ``ax`` only; the array index (i, j, k) of that component refers to the
    point between centers (i, j, k) and its +1 neighbour on axis ``ax``.
    """

    spec: GridSpec
    components: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.components) != self.spec.dim:
            raise ValueError(
                f"expected {self.spec.dim} components, got {len(self.components)}"
            )
        comps = tuple(_as_values(self.spec, c) for c in self.components)
        object.__setattr__(self, "components", comps)

    def __add__(self, other: "StaggeredField") -> "StaggeredField":
        if self.spec != other.spec:
            raise ValueError("staggered fields live on different grids")
        return StaggeredField(
            self.spec,
            tuple(a + b for a, b in zip(self.components, other.components)),
        )


@dataclass(frozen=True)
class FieldNorms:
    """Discrete norms of a grid function: plain l2, max, and the Sobolev-style
    h1/h2 norms that add gradient and Laplacian energy."""

    l2: float
    linf: float
    h1: float
    h2: float


def _check_same_spec(f, g):
    if f.spec != g.spec:
        raise ValueError("fields live on different grids")


def mean(f: RealField) -> float:
    """Domain average (1/|domain|) * <f, 1>, i.e. the arithmetic mean."""
    return float(np.mean(f.values))


def inner(f: RealField, g: RealField) -> float:
    """Discrete L2 inner product h**dim * sum(f*g)."""
    _check_same_spec(f, g)
    return f.spec.h**f.spec.dim * float(np.sum(f.values * g.values))


def grad(f: RealField) -> StaggeredField:
    """Forward-difference gradient, one staggered component per axis."""
    v, h = f.values, f.spec.h
    comps = tuple(
        (np.roll(v, -1, axis=ax) - v) / h for ax in range(f.spec.dim)
    )
    return StaggeredField(f.spec, comps)


def divergence(vec: StaggeredField) -> RealField:
    """Backward-difference divergence of a staggered field, at cell centers."""
    h = vec.spec.h
    out = np.zeros(vec.spec.shape)
    for ax, c in enumerate(vec.components):
        out += (c - np.roll(c, 1, axis=ax)) / h
    return RealField(vec.spec, out)


def laplacian(f: RealField) -> RealField:
    """Standard (2*dim+1)-point Laplacian stencil with periodic wrap."""
    v, h = f.values, f.spec.h
    out = -2.0 * f.spec.dim * v.copy()
    for ax in range(f.spec.dim):
        out += np.roll(v, -1, axis=ax) + np.roll(v, 1, axis=ax)
    return RealField(f.spec, out / h**2)


def staggered_inner(a: StaggeredField, b: StaggeredField) -> float:
    """Inner product of staggered fields.

    Componentwise products are averaged back to cell centers before summing;
    under the full periodic sum the two half-weights of every staggered point
    recombine, so the value equals the plain componentwise sum scaled by the
    cell volume.  With a = b = grad(f) this is the squared gradient norm.
    """
    if a.spec != b.spec:
        raise ValueError("fields live on different grids")
    total = 0.0
    for ca, cb in zip(a.components, b.components):
        total += float(np.sum(ca * cb))
    return a.spec.h**a.spec.dim * total


def norms(f: RealField) -> FieldNorms:
    """All discrete norms of f in one pass.

    h1**2 adds the squared gradient norm to l2**2, and h2**2 additionally
    adds the squared Laplacian norm.
    """
    l2sq = inner(f, f)
    g = grad(f)
    gradsq = staggered_inner(g, g)
    lap = laplacian(f)
    lapsq = inner(lap, lap)
    h1sq = l2sq + gradsq
    return FieldNorms(
        l2=float(np.sqrt(l2sq)),
        linf=float(np.max(np.abs(f.values))),
        h1=float(np.sqrt(h1sq)),
        h2=float(np.sqrt(h1sq + lapsq)),
    )


def random_field(
    spec: GridSpec,
    rng: np.random.Generator,
    amplitude: float = 1.0,
    shift: float = 0.0,
) -> RealField:
    """Seeded test field: uniform values in [-amplitude, amplitude] plus an
    optional constant shift."""
    return RealField(spec, shift + amplitude * rng.uniform(-1.0, 1.0, spec.shape))
