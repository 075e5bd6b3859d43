"""Finite tracial matrix model: square complex matrices with a weighted trace.

The trace is tau = w * Tr for a positive weight w, so spectral projections
take trace values on the grid w, 2w, ...; the singular value function of a
matrix is its sorted singular values read as a step function with intervals
of width w.  Decompositions come from LAPACK and are deterministic for
identical input bytes; every derived object is validated against the
residual and orthonormality tolerances below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .stepfn import INF, SingularFunction, StepFunction, rearrange

OP_TOL = 1e-9        # reconstruction / projection quality, relative to the top singular value
FRAME_TOL = 1e-10    # orthonormality defect allowed in singular frames
RANK_REL = 1e-8      # rank cut, relative to the top singular value
RANK_ABS = 1e-12     # absolute rank cut for the zero matrix


class DecompositionError(RuntimeError):
    """Raised when a singular value decomposition fails its quality gates."""


@dataclass(frozen=True, eq=False)
class TraceMatrix:
    """Immutable square complex matrix carrying a positive trace weight."""

    entries: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError("entries must form a nonempty square matrix")
        if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
            raise ValueError("entries must be finite")
        w = float(self.weight)
        if not (w > 0.0 and math.isfinite(w)):
            raise ValueError("trace weight must be positive and finite")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "weight", w)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def _compat(self, other: "TraceMatrix"):
        if self.n != other.n or self.weight != other.weight:
            raise ValueError("matrices are composable only with equal size and weight")

    def trace_value(self) -> complex:
        return self.weight * complex(np.trace(self.entries))

    def adjoint(self) -> "TraceMatrix":
        return TraceMatrix(self.entries.conj().T, self.weight)

    def opnorm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))

    def __add__(self, other):
        self._compat(other)
        return TraceMatrix(self.entries + other.entries, self.weight)

    def __sub__(self, other):
        self._compat(other)
        return TraceMatrix(self.entries - other.entries, self.weight)

    def __matmul__(self, other):
        self._compat(other)
        return TraceMatrix(self.entries @ other.entries, self.weight)

    def __mul__(self, c):
        return TraceMatrix(complex(c) * self.entries, self.weight)

    __rmul__ = __mul__

    def __neg__(self):
        return TraceMatrix(-self.entries, self.weight)

    def __repr__(self):
        return f"TraceMatrix(n={self.n}, weight={self.weight!r})"


def diag(values, weight: float = 1.0) -> TraceMatrix:
    return TraceMatrix(np.diag(np.asarray(values, dtype=np.complex128)), weight)


def identity(n: int, weight: float = 1.0) -> TraceMatrix:
    return TraceMatrix(np.eye(n, dtype=np.complex128), weight)


def zeros(n: int, weight: float = 1.0) -> TraceMatrix:
    return TraceMatrix(np.zeros((n, n), dtype=np.complex128), weight)


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Singular values (descending) with orthonormal left/right frames."""

    sigma: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def top(self) -> float:
        return float(self.sigma[0]) if self.sigma.size else 0.0

    def rank_tol(self) -> float:
        return RANK_REL * self.top if self.top > 0.0 else RANK_ABS

    def rank(self) -> int:
        return int(np.count_nonzero(self.sigma > self.rank_tol()))


@lru_cache(maxsize=512)
def spectral(x: TraceMatrix) -> SpectralData:
    """Singular value decomposition with the module quality gates applied."""
    try:
        u, s, vh = np.linalg.svd(x.entries)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"singular value decomposition failed: {exc}") from exc
    right = vh.conj().T
    n = x.n
    eye = np.eye(n)
    for frame in (u, right):
        if np.max(np.abs(frame.conj().T @ frame - eye)) > FRAME_TOL:
            raise DecompositionError("singular frame is not orthonormal to tolerance")
    residual = float(np.linalg.norm((u * s) @ vh - x.entries, 2))
    top = float(s[0]) if s.size else 0.0
    if residual > OP_TOL * max(top, RANK_ABS):
        raise DecompositionError("reconstruction residual exceeds tolerance")
    for a in (s, u, right):
        a.setflags(write=False)
    return SpectralData(s, u, right)


def mu_of(x: TraceMatrix) -> SingularFunction:
    """Singular value function: value sigma_i on [w(i-1), wi), vanishing tail."""
    s = spectral(x).sigma
    w = x.weight
    return SingularFunction(
        tuple(w * (i + 1) for i in range(len(s))),
        tuple(float(v) for v in s),
        0.0,
    )


def dist_op(x: TraceMatrix, s: float) -> float:
    """Trace of the spectral projection of |x| above the level s."""
    if s < 0.0:
        raise ValueError("level must be nonnegative")
    return x.weight * int(np.count_nonzero(spectral(x).sigma > s))


def spectral_projection(x: TraceMatrix, lo: float, hi: float = INF) -> TraceMatrix:
    """Orthogonal projection onto the singular directions of |x| with value in (lo, hi]."""
    if not (0.0 <= lo < hi):
        raise ValueError("need 0 <= lo < hi")
    sd = spectral(x)
    sel = (sd.sigma > lo) & (sd.sigma <= hi)
    v = sd.right[:, sel]
    p = v @ v.conj().T
    return TraceMatrix((p + p.conj().T) / 2.0, x.weight)


def polar(x: TraceMatrix) -> tuple[TraceMatrix, TraceMatrix]:
    """Partial isometry u and positive part so that x = u @ absx.

    The initial space of u is the support of absx (rank decided by the
    module rank cut).
    """
    sd = spectral(x)
    sel = sd.sigma > sd.rank_tol()
    u = sd.left[:, sel] @ sd.right[:, sel].conj().T
    absx = (sd.right * sd.sigma) @ sd.right.conj().T
    absx = (absx + absx.conj().T) / 2.0
    return TraceMatrix(u, x.weight), TraceMatrix(absx, x.weight)


def trace_norms(x: TraceMatrix) -> tuple[float, float]:
    """(w * rank, top singular value)."""
    sd = spectral(x)
    return x.weight * sd.rank(), sd.top


def k_direct(x: TraceMatrix, u: float):
    """Minimise |g|_0 + u*|h|_inf over spectral cuts of x.

    The cut at level s keeps g = x restricted to singular directions above s
    and leaves h = x - g; the cost is piecewise constant between singular
    values, so only the distinct values (plus the keep-everything cut just
    above zero) need to be enumerated.
    """
    if not u > 0.0:
        raise ValueError("u must be positive")
    sd = spectral(x)
    w = x.weight
    sig = sd.sigma
    best_cost = w * sd.rank()          # keep the whole support, bounded part vanishes
    best_level = None
    for s in sorted(set(float(v) for v in sig), reverse=True):
        cost = w * int(np.count_nonzero(sig > s)) + u * s
        if cost < best_cost:
            best_cost, best_level = cost, s
    if best_level is None:
        sel = sig > sd.rank_tol()
    else:
        sel = sig > best_level
    g = (sd.left[:, sel] * sig[sel]) @ sd.right[:, sel].conj().T
    gm = TraceMatrix(g, w)
    return float(best_cost), (gm, x - gm)


def as_singular(obj) -> SingularFunction:
    """Coerce a matrix or step function to its decreasing rearrangement."""
    if isinstance(obj, TraceMatrix):
        return mu_of(obj)
    if isinstance(obj, SingularFunction):
        return obj
    if isinstance(obj, StepFunction):
        return rearrange(obj)
    raise TypeError(f"cannot take a singular value function of {type(obj).__name__}")


def allclose(x: TraceMatrix, y: TraceMatrix, tol: float = 1e-12) -> bool:
    x._compat(y)
    scale = max(1.0, x.opnorm(), y.opnorm())
    return float(np.max(np.abs(x.entries - y.entries))) <= tol * scale


# -- serialisation -----------------------------------------------------------


def matrix_to_dict(x: TraceMatrix) -> dict:
    d = {
        "n": x.n,
        "w": x.weight,
        "re": x.entries.real.tolist(),
    }
    if np.any(x.entries.imag != 0.0):
        d["im"] = x.entries.imag.tolist()
    return d


def matrix_from_dict(d: dict) -> TraceMatrix:
    if not isinstance(d, dict):
        raise ValueError("expected a JSON object")
    try:
        n = int(d["n"])
        w = float(d["w"])
        re = np.asarray(d["re"], dtype=np.float64)
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from None
    if re.shape != (n, n):
        raise ValueError(f"'re' must be {n}x{n}, got shape {re.shape}")
    entries = re.astype(np.complex128)
    if "im" in d:
        im = np.asarray(d["im"], dtype=np.float64)
        if im.shape != (n, n):
            raise ValueError(f"'im' must be {n}x{n}, got shape {im.shape}")
        entries = entries + 1j * im
    return TraceMatrix(entries, w)
