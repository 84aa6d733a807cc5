"""Factories for named bipartite state families and seeded random generators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError
from .linalg import partial_trace, tensor_product, validate_density


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def classical_bipartite(probs) -> np.ndarray:
    """Diagonal encoding of a joint probability table p[k, l].

    Returns sum_kl p_kl |k><k| (x) |l><l| on a dim_a x dim_b space.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 2:
        raise ValueError("probs must be a 2-D table")
    if p.min() < 0.0:
        raise ValueError("probabilities must be non-negative")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities must sum to 1, got {p.sum()!r}")
    return np.diag(p.reshape(-1).astype(complex))


def singlet() -> np.ndarray:
    """The maximally entangled two-qubit vector (|01> - |10>)/sqrt(2)."""
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)


def bell_state(kind: str = "psi-") -> np.ndarray:
    """One of the four Bell vectors: 'phi+', 'phi-', 'psi+', 'psi-'."""
    table = {
        "phi+": [1.0, 0.0, 0.0, 1.0],
        "phi-": [1.0, 0.0, 0.0, -1.0],
        "psi+": [0.0, 1.0, 1.0, 0.0],
        "psi-": [0.0, 1.0, -1.0, 0.0],
    }
    if kind not in table:
        raise ValueError(f"unknown Bell state {kind!r}")
    return np.array(table[kind], dtype=complex) / np.sqrt(2.0)


def pseudo_pure(psi, p: float, n_qubits: int | None = None) -> np.ndarray:
    """Mixture p |psi><psi| + (1-p) I / 2^n of a pure vector with white noise.

    The carrier is bipartite with an even number of qubits split half/half.
    """
    psi = np.asarray(psi, dtype=complex)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("psi must be normalized")
    dim = psi.shape[0]
    n = int(round(np.log2(dim))) if n_qubits is None else n_qubits
    if 2**n != dim:
        raise ValueError(f"vector length {dim} is not 2^{n}")
    if n % 2 != 0:
        raise ValueError("pseudo-pure carrier needs an even number of qubits")
    return p * np.outer(psi, psi.conj()) + (1.0 - p) * maximally_mixed(dim)


def werner(p: float) -> np.ndarray:
    """Depolarized singlet p |psi-><psi-| + (1-p) I/4; entangled for p > 1/3."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return pseudo_pure(singlet(), p, 2)


def tile_basis() -> tuple[list[np.ndarray], np.ndarray]:
    """Nine orthonormal two-qutrit product vectors plus the stopper tile.

    The nine tiles form a complete product basis whose members cannot all
    be distinguished by local operations and classical communication; the
    stopper is the uniform product vector overlapping all of them.
    """
    e = np.eye(3, dtype=complex)
    r2 = 1.0 / np.sqrt(2.0)
    tiles = [
        tensor_product(e[0], r2 * (e[0] + e[1])),
        tensor_product(e[0], r2 * (e[0] - e[1])),
        tensor_product(e[2], r2 * (e[1] + e[2])),
        tensor_product(e[2], r2 * (e[1] - e[2])),
        tensor_product(e[1], e[1]),
        tensor_product(r2 * (e[0] + e[1]), e[2]),
        tensor_product(r2 * (e[0] - e[1]), e[2]),
        tensor_product(r2 * (e[1] + e[2]), e[0]),
        tensor_product(r2 * (e[1] - e[2]), e[0]),
    ]
    ones = (e[0] + e[1] + e[2]) / np.sqrt(3.0)
    stopper = tensor_product(ones, ones)
    return tiles, stopper


def bound_entangled_tiles() -> np.ndarray:
    """Rank-4 PPT entangled two-qutrit state built from the tile construction.

    Projects out tiles 2, 4, 7, 9 and the stopper (a mutually orthonormal
    five-set) from the identity and renormalizes.
    """
    tiles, stopper = tile_basis()
    removed = [tiles[1], tiles[3], tiles[6], tiles[8], stopper]
    rho = np.eye(9, dtype=complex)
    for v in removed:
        rho -= np.outer(v, v.conj())
    return rho / 4.0


def cq_state(alphas, basis_a, taus) -> np.ndarray:
    """Classical-quantum state sum_a alpha_a |a><a| (x) tau_a.

    ``basis_a`` is an orthonormal list of vectors on A, ``taus`` the
    matching list of density matrices on B.
    """
    alphas = np.asarray(alphas, dtype=float)
    if alphas.min() < 0.0 or abs(alphas.sum() - 1.0) > 1e-10:
        raise ValueError("alphas must be a probability vector")
    vecs = [np.asarray(v, dtype=complex) for v in basis_a]
    if len(vecs) != len(alphas) or len(taus) != len(alphas):
        raise ValueError("alphas, basis_a and taus must have equal length")
    gram = np.array([[u.conj() @ v for v in vecs] for u in vecs])
    if np.max(np.abs(gram - np.eye(len(vecs)))) > 1e-10:
        raise ValueError("basis_a must be orthonormal")
    parts = []
    for a, v, tau in zip(alphas, vecs, taus):
        tau = np.asarray(tau, dtype=complex)
        if not validate_density(tau, tol=1e-8).ok:
            raise InvalidStateError("tau entries must be valid density matrices")
        parts.append(a * tensor_product(np.outer(v, v.conj()), tau))
    return sum(parts)


def random_density(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Seeded random density matrix of the given rank (Ginibre construction)."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(dim: int, seed=None) -> np.ndarray:
    """Seeded Haar-like random unit vector."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class Channel:
    """CPTP map realized as an isometry into system (x) environment plus trace."""

    isometry: np.ndarray
    dim: int
    env_dim: int

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        big = self.isometry @ rho @ self.isometry.conj().T
        return partial_trace(big, self.dim, self.env_dim, keep="a")


def random_channel(dim: int, env_dim: int, seed=None) -> Channel:
    """Seeded random CPTP channel on a dim-dimensional system."""
    if dim < 1 or env_dim < 1:
        raise ValueError("dim and env_dim must be positive")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim * env_dim, dim)) + 1j * rng.standard_normal(
        (dim * env_dim, dim)
    )
    q, r = np.linalg.qr(g)
    # canonical column phases keep the isometry deterministic per seed
    phases = np.diag(r) / np.abs(np.diag(r))
    q = q * phases.conj()
    return Channel(q, dim, env_dim)
