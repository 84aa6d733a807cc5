"""Dense complex linear algebra primitives for small quantum states.

States are plain numpy arrays.  Bipartite indexing puts subsystem A on
the slow (most significant) axis, so the composite basis state |a b>
lives at row a * dim_b + b and the ordering {|00>, |01>, |10>, |11>}
matches a two-qubit state written in that basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatchError

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-10
# eigenvalue gaps below this are treated as degenerate and tie-broken
DEGENERACY_GAP = 1e-9


class Spectrum(NamedTuple):
    """Eigenvalues sorted descending; eigenvector i sits in column i."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class DensityReport:
    """Diagnostics from :func:`validate_density`."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    ok: bool


def _as_square(m, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {m.shape}")
    return m


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the first factor on the slow index."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("tensor_product requires finite entries")
    return np.kron(a, b)


def partial_trace(rho, dim_a: int, dim_b: int, keep: str = "a") -> np.ndarray:
    """Trace out one subsystem of a bipartite operator.

    ``keep`` selects the surviving subsystem ("a" or "b").
    """
    rho = _as_square(rho, "rho")
    if rho.shape[0] != dim_a * dim_b:
        raise DimensionMismatchError(
            f"state dim {rho.shape[0]} != dim_a*dim_b = {dim_a * dim_b}"
        )
    r = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "a":
        return np.einsum("ijkj->ik", r)
    if keep == "b":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def partial_transpose(rho, dim_a: int, dim_b: int, on: str = "b") -> np.ndarray:
    """Transpose one tensor factor of a bipartite operator."""
    rho = _as_square(rho, "rho")
    if rho.shape[0] != dim_a * dim_b:
        raise DimensionMismatchError(
            f"state dim {rho.shape[0]} != dim_a*dim_b = {dim_a * dim_b}"
        )
    r = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if on == "b":
        out = r.transpose(0, 3, 2, 1)
    elif on == "a":
        out = r.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"on must be 'a' or 'b', got {on!r}")
    return out.reshape(dim_a * dim_b, dim_a * dim_b)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its largest component is real positive."""
    k = int(np.argmax(np.abs(v)))
    ph = v[k] / abs(v[k])
    return v * np.conj(ph)


def _tie_break_cluster(cluster: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis for a degenerate eigenspace.

    Projects computational basis vectors onto the eigenspace in index
    order and Gram-Schmidts the survivors; the result depends only on
    the subspace, not on the solver's arbitrary rotation within it.
    """
    dim, k = cluster.shape
    proj = cluster @ cluster.conj().T
    chosen: list[np.ndarray] = []
    for j in range(dim):
        v = proj[:, j].copy()
        for u in chosen:
            v -= u * (u.conj() @ v)
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            chosen.append(v / nrm)
        if len(chosen) == k:
            break
    if len(chosen) != k:  # projector has rank k, so this cannot trigger
        raise RuntimeError("tie-break failed to span the degenerate cluster")
    return np.column_stack(chosen)


def eig_hermitian(m) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Output is deterministic: phases are canonicalized and eigenvectors
    inside near-degenerate clusters (gap < 1e-9) are rebuilt from
    projected computational basis vectors in index order.
    """
    m = _as_square(m)
    defect = float(np.max(np.abs(m - m.conj().T)))
    if defect > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    vals, vecs = np.linalg.eigh(m)
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    n = len(vals)
    start = 0
    for stop in range(1, n + 1):
        if stop < n and vals[stop - 1] - vals[stop] < DEGENERACY_GAP:
            continue
        if stop - start > 1:
            vecs[:, start:stop] = _tie_break_cluster(vecs[:, start:stop])
        else:
            vecs[:, start] = _fix_phase(vecs[:, start])
        start = stop
    return Spectrum(vals, vecs)


def psd_sqrt(m) -> np.ndarray:
    """Hermitian square root of a PSD matrix (tiny negatives clipped)."""
    spec = eig_hermitian(m)
    vals = spec.eigenvalues
    if vals.min() < -PSD_TOL:
        raise ValueError(f"matrix is not PSD (min eigenvalue {vals.min():.3e})")
    root = np.sqrt(np.clip(vals, 0.0, None))
    r = (spec.eigenvectors * root) @ spec.eigenvectors.conj().T
    return 0.5 * (r + r.conj().T)


def validate_density(m, tol: float = 1e-10) -> DensityReport:
    """Diagnose how far a matrix is from being a valid density matrix."""
    m = _as_square(m)
    herm = float(np.max(np.abs(m - m.conj().T)))
    tr = float(abs(np.trace(m) - 1.0))
    sym = 0.5 * (m + m.conj().T)
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    ok = herm <= tol and tr <= tol and min_eig >= -tol
    return DensityReport(herm, tr, min_eig, ok)
