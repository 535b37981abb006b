"""Quantum channel representations and conversions.

A channel is described by one of five interchangeable forms: a unitary
matrix, a Kraus operator list, a Pauli probability four-vector, a classical
column-stochastic matrix, or a unitary mixed with depolarizing noise.  The
module converts between them, evaluates channels on operators, computes Choi
matrices, and analyzes the affine action of qubit channels on Bloch vectors
(unitality, pure fixed points).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .linalg import (
    DECISION_TOL,
    as_complex_matrix,
    is_isometry,
)

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)

# Trace preservation and probability normalization are structural facts.
_TRACE_TOL = 1e-10
# Probabilities this far below zero are treated as round-off and clamped.
_PROB_CLAMP = 1e-12


def _check_unitary(m, name: str) -> np.ndarray:
    arr = as_complex_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square")
    if not is_isometry(arr, 1e-10):
        raise ValueError(f"{name} is not unitary within 1e-10")
    return arr


@dataclass(frozen=True)
class Unitary:
    """Channel ``rho -> U rho U^dag`` for a unitary matrix ``U``."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _check_unitary(self.matrix, "unitary matrix"))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class KrausChannel:
    """Channel ``rho -> sum_k K_k rho K_k^dag`` with trace-preserving Kraus operators."""

    kraus_ops: tuple

    def __post_init__(self) -> None:
        ops = tuple(as_complex_matrix(k, f"kraus_ops[{i}]") for i, k in enumerate(self.kraus_ops))
        if not ops:
            raise ValueError("need at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValueError("Kraus operators must share a common shape")
        gram = sum(k.conj().T @ k for k in ops)
        if np.linalg.norm(gram - np.eye(shape[1])) > _TRACE_TOL:
            raise ValueError("Kraus operators do not sum to the identity (not trace preserving)")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def din(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def dout(self) -> int:
        return self.kraus_ops[0].shape[0]


@dataclass(frozen=True)
class PauliFourVector:
    """Qubit Pauli channel ``rho -> sum_i p_i sigma_i rho sigma_i``."""

    p0: float
    px: float
    py: float
    pz: float

    def __post_init__(self) -> None:
        probs = []
        for name in ("p0", "px", "py", "pz"):
            value = float(getattr(self, name))
            if value < -_PROB_CLAMP:
                raise ValueError(f"{name} = {value} is negative")
            probs.append(max(value, 0.0))
        if abs(sum(probs) - 1.0) > _TRACE_TOL:
            raise ValueError(f"probabilities sum to {sum(probs)}, expected 1 within {_TRACE_TOL}")
        for name, value in zip(("p0", "px", "py", "pz"), probs):
            object.__setattr__(self, name, value)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([self.p0, self.px, self.py, self.pz])


@dataclass(frozen=True)
class ClassicalChannel:
    """Classical channel given by conditional probabilities ``p(y|x)``.

    ``probs[y, x]`` is the probability of output symbol ``y`` given input
    ``x``; every column is a distribution over outputs.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.probs, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("probs must be a non-empty 2-d array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("probs contains non-finite entries")
        if np.any(arr < -_PROB_CLAMP):
            raise ValueError("probs contains negative entries")
        arr = np.clip(arr, 0.0, None)
        sums = arr.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > _TRACE_TOL):
            raise ValueError(f"column sums {sums} differ from 1 beyond {_TRACE_TOL}")
        object.__setattr__(self, "probs", arr)

    @property
    def in_size(self) -> int:
        return self.probs.shape[1]

    @property
    def out_size(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class DepolarizedUnitary:
    """Channel ``rho -> p U rho U^dag + (1-p) Tr(rho) 1/d``."""

    p: float
    matrix: np.ndarray

    def __post_init__(self) -> None:
        p = float(self.p)
        if p < -_PROB_CLAMP or p > 1.0 + _PROB_CLAMP:
            raise ValueError(f"p = {p} is not a probability")
        object.__setattr__(self, "p", min(max(p, 0.0), 1.0))
        object.__setattr__(self, "matrix", _check_unitary(self.matrix, "unitary matrix"))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


ChannelSpec = Union[Unitary, KrausChannel, PauliFourVector, ClassicalChannel, DepolarizedUnitary]


@dataclass(frozen=True)
class BlochAffine:
    """Affine action ``n -> matrix @ n + shift`` of a qubit channel on Bloch vectors."""

    matrix: np.ndarray
    shift: np.ndarray


class _AllDirections:
    """Sentinel: every unit Bloch vector is a fixed point."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "AllDirections"


ALL_DIRECTIONS = _AllDirections()


def channel_dims(spec: ChannelSpec) -> tuple[int, int]:
    """Input and output dimensions of a channel."""
    if isinstance(spec, Unitary):
        return spec.dim, spec.dim
    if isinstance(spec, KrausChannel):
        return spec.din, spec.dout
    if isinstance(spec, PauliFourVector):
        return 2, 2
    if isinstance(spec, ClassicalChannel):
        return spec.in_size, spec.out_size
    if isinstance(spec, DepolarizedUnitary):
        return spec.dim, spec.dim
    raise TypeError(f"not a channel spec: {spec!r}")


def identity_channel(dim: int = 2) -> Unitary:
    """The identity channel on a ``dim``-dimensional system."""
    return Unitary(np.eye(dim, dtype=complex))


def apply(spec: ChannelSpec, rho) -> np.ndarray:
    """Evaluate the channel on an operator (not restricted to states)."""
    arr = as_complex_matrix(rho, "rho")
    din, _ = channel_dims(spec)
    if arr.shape != (din, din):
        raise ValueError(f"operator shape {arr.shape} does not match channel input dimension {din}")
    if isinstance(spec, Unitary):
        return spec.matrix @ arr @ spec.matrix.conj().T
    if isinstance(spec, KrausChannel):
        out = np.zeros((spec.dout, spec.dout), dtype=complex)
        for k in spec.kraus_ops:
            out += k @ arr @ k.conj().T
        return out
    if isinstance(spec, PauliFourVector):
        return (
            spec.p0 * arr
            + spec.px * SIGMA_X @ arr @ SIGMA_X
            + spec.py * SIGMA_Y @ arr @ SIGMA_Y
            + spec.pz * SIGMA_Z @ arr @ SIGMA_Z
        )
    if isinstance(spec, ClassicalChannel):
        return np.diag(spec.probs.astype(complex) @ np.diag(arr))
    if isinstance(spec, DepolarizedUnitary):
        d = spec.dim
        coherent = spec.matrix @ arr @ spec.matrix.conj().T
        return spec.p * coherent + (1.0 - spec.p) * np.trace(arr) * np.eye(d) / d
    raise TypeError(f"not a channel spec: {spec!r}")


def to_kraus(spec: ChannelSpec) -> KrausChannel:
    """Kraus form of the channel (zero-probability operators are dropped)."""
    if isinstance(spec, KrausChannel):
        return spec
    if isinstance(spec, Unitary):
        return KrausChannel((spec.matrix,))
    if isinstance(spec, PauliFourVector):
        ops = tuple(
            np.sqrt(p) * sigma
            for p, sigma in zip(spec.probabilities, PAULIS)
            if p > 0.0
        )
        return KrausChannel(ops)
    if isinstance(spec, ClassicalChannel):
        ops = []
        for y in range(spec.out_size):
            for x in range(spec.in_size):
                p = spec.probs[y, x]
                if p > 0.0:
                    k = np.zeros((spec.out_size, spec.in_size), dtype=complex)
                    k[y, x] = np.sqrt(p)
                    ops.append(k)
        return KrausChannel(tuple(ops))
    if isinstance(spec, DepolarizedUnitary):
        d = spec.dim
        ops = []
        if spec.p > 0.0:
            ops.append(np.sqrt(spec.p) * spec.matrix)
        if spec.p < 1.0:
            scale = np.sqrt((1.0 - spec.p) / d)
            for i in range(d):
                for j in range(d):
                    k = np.zeros((d, d), dtype=complex)
                    k[i, j] = scale
                    ops.append(k)
        return KrausChannel(tuple(ops))
    raise TypeError(f"not a channel spec: {spec!r}")


def choi(spec: ChannelSpec) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) E(|i><j|)`` (channel on the second factor).

    The defining entangled operator is unnormalized, so the partial trace of
    the result over the output factor equals the identity on the input space.
    """
    din, dout = channel_dims(spec)
    out = np.zeros((din * dout, din * dout), dtype=complex)
    basis_op = np.zeros((din, din), dtype=complex)
    for i in range(din):
        for j in range(din):
            basis_op[i, j] = 1.0
            block = apply(spec, basis_op)
            out[i * dout:(i + 1) * dout, j * dout:(j + 1) * dout] = block
            basis_op[i, j] = 0.0
    return out


def bloch_affine(spec: ChannelSpec) -> BlochAffine:
    """Affine Bloch-sphere action ``n -> A n + b`` of a qubit channel."""
    if channel_dims(spec) != (2, 2):
        raise ValueError("Bloch representation requires a qubit channel")
    sigmas = (SIGMA_X, SIGMA_Y, SIGMA_Z)
    a = np.empty((3, 3), dtype=complex)
    b = np.empty(3, dtype=complex)
    image_id = apply(spec, SIGMA_0)
    for i, si in enumerate(sigmas):
        b[i] = 0.5 * np.trace(si @ image_id)
    for j, sj in enumerate(sigmas):
        image = apply(spec, sj)
        for i, si in enumerate(sigmas):
            a[i, j] = 0.5 * np.trace(si @ image)
    residue = max(np.abs(a.imag).max(), np.abs(b.imag).max())
    if residue > 1e-10:
        raise ValueError(f"Bloch action has imaginary residue {residue}; channel is not Hermiticity preserving")
    return BlochAffine(a.real.copy(), b.real.copy())


def is_unital(spec: ChannelSpec, tol: float = DECISION_TOL) -> bool:
    """True iff the channel maps the identity to the identity within ``tol``."""
    din, dout = channel_dims(spec)
    if din != dout:
        raise ValueError("unitality is defined only for equal input/output dimensions")
    image = apply(spec, np.eye(din, dtype=complex))
    return bool(np.linalg.norm(image - np.eye(dout)) <= tol)


def _canonical_direction(v: np.ndarray) -> np.ndarray:
    w = v / np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(w) > 1e-8)
    if nz.size and w[nz[-1]] < 0:
        w = -w
    return w


def _dedupe_directions(dirs: list[np.ndarray]) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for v in dirs:
        if all(np.linalg.norm(v - u) > 1e-8 for u in kept):
            kept.append(v)
    return kept


def pure_fixed_points(spec: ChannelSpec, tol: float = DECISION_TOL):
    """Unit Bloch vectors ``n`` with ``A n + b = n``, i.e. pure fixed states.

    Returns ``ALL_DIRECTIONS`` when the channel is the identity within
    ``tol``, ``None`` when no pure state is fixed, and otherwise a list of
    unit vectors (antipodal pairs appear as two entries).  Every returned
    direction is re-verified at the channel level within ``10 * tol``.
    """
    aff = bloch_affine(spec)
    a, b = aff.matrix, aff.shift
    eye3 = np.eye(3)
    if np.linalg.norm(a - eye3) <= tol and np.linalg.norm(b) <= tol:
        return ALL_DIRECTIONS

    shifted = a - eye3
    _, svals, vt = np.linalg.svd(shifted)
    kernel = [vt[i] for i in range(3) if svals[i] <= tol]

    candidates: list[np.ndarray] = []
    if np.linalg.norm(b) <= tol:
        for v in kernel:
            c = _canonical_direction(v)
            candidates.extend([c, -c])
    else:
        x, *_ = np.linalg.lstsq(shifted, -b, rcond=None)
        residual = np.linalg.norm(shifted @ x + b)
        if residual <= tol:
            norm_x = np.linalg.norm(x)
            if abs(norm_x - 1.0) <= tol:
                candidates.append(x / norm_x)
            elif norm_x < 1.0 and kernel:
                # Affine solution line: the minimum-norm solution plus kernel
                # components reaches the unit sphere at two points.
                t = np.sqrt(1.0 - norm_x**2)
                for v in kernel:
                    candidates.extend([x + t * v, x - t * v])

    fixed: list[np.ndarray] = []
    for v in candidates:
        v = v / np.linalg.norm(v)
        rho = 0.5 * (SIGMA_0 + v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z)
        if np.linalg.norm(apply(spec, rho) - rho) <= 10 * tol:
            fixed.append(v)
    fixed = _dedupe_directions(fixed)
    return fixed if fixed else None


def conjugate(spec: ChannelSpec, pre, post) -> KrausChannel:
    """The channel ``rho -> post E(pre rho pre^dag) post^dag`` in Kraus form."""
    din, dout = channel_dims(spec)
    pre_m = _check_unitary(pre, "pre")
    post_m = _check_unitary(post, "post")
    if pre_m.shape[0] != din:
        raise ValueError(f"pre-unitary dimension {pre_m.shape[0]} does not match channel input {din}")
    if post_m.shape[0] != dout:
        raise ValueError(f"post-unitary dimension {post_m.shape[0]} does not match channel output {dout}")
    kc = to_kraus(spec)
    return KrausChannel(tuple(post_m @ k @ pre_m for k in kc.kraus_ops))


# -- named channel constructors ----------------------------------------------


def bit_flip(p: float) -> PauliFourVector:
    """Flip the computational basis with probability ``p``."""
    return PauliFourVector(1.0 - p, p, 0.0, 0.0)


def dephasing(p: float) -> PauliFourVector:
    """Apply a Z error with probability ``p``."""
    return PauliFourVector(1.0 - p, 0.0, 0.0, p)


def depolarizing(p: float) -> PauliFourVector:
    """Uniform Pauli noise of strength ``p``."""
    return PauliFourVector(1.0 - 3.0 * p / 4.0, p / 4.0, p / 4.0, p / 4.0)


def amplitude_damping(gamma: float) -> KrausChannel:
    """Decay toward ``|0>`` with probability ``gamma``."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel((k0, k1))


def axis_operator(axis) -> np.ndarray:
    """The Hermitian unitary ``n . sigma`` for a unit 3-vector ``n``."""
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise ValueError("axis must be a unit 3-vector")
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def rotation_about(axis, angle: float) -> np.ndarray:
    """Qubit rotation ``exp(-i angle (n . sigma) / 2)`` about a unit axis."""
    return np.cos(angle / 2) * SIGMA_0 - 1j * np.sin(angle / 2) * axis_operator(axis)


def dephasing_about(axis, p: float) -> KrausChannel:
    """Dephasing of strength ``p`` along an arbitrary Bloch axis."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return KrausChannel((np.sqrt(1.0 - p) * SIGMA_0, np.sqrt(p) * axis_operator(axis)))


def random_classical_channel(in_size: int, out_size: int, rng: np.random.Generator) -> ClassicalChannel:
    """Random column-stochastic channel with Dirichlet-uniform columns."""
    cols = rng.dirichlet(np.ones(out_size), size=in_size)
    return ClassicalChannel(cols.T)
