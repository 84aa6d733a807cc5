"""Self-check suites behind the `verify` CLI command.

Each check exercises one documented invariant on seeded random inputs and
reports (name, passed, detail).  The suites mirror the pytest coverage but
ship with the package so an installation can be validated in the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import detector, linalg, measures, states


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _result(name: str, worst: float, bound: float) -> CheckResult:
    return CheckResult(name, worst <= bound, f"worst {worst:.3e} vs bound {bound:.3e}")


def _random_dims(rng) -> tuple[int, int]:
    return int(rng.integers(2, 4)), int(rng.integers(2, 4))


def _random_unitary(dim: int, rng) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r))).conj()


def core_suite(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []

    worst = 0.0
    for _ in range(100):
        da, db = _random_dims(rng)
        rho_a = states.random_density(da, seed=rng.integers(2**32))
        rho_b = states.random_density(db, seed=rng.integers(2**32))
        prod = linalg.tensor_product(rho_a, rho_b)
        worst = max(
            worst,
            float(np.max(np.abs(linalg.partial_trace(prod, da, db, "a") - rho_a))),
            float(np.max(np.abs(linalg.partial_trace(prod, da, db, "b") - rho_b))),
        )
    out.append(_result("partial trace recovers tensor factors", worst, 1e-12))

    worst = 0.0
    for _ in range(100):
        da, db = _random_dims(rng)
        rho = states.random_density(da * db, seed=rng.integers(2**32))
        twice = linalg.partial_transpose(
            linalg.partial_transpose(rho, da, db, "b"), da, db, "b"
        )
        worst = max(worst, float(np.max(np.abs(twice - rho))))
    out.append(_result("partial transpose is an involution", worst, 1e-15))

    worst_rec = worst_orth = 0.0
    for _ in range(100):
        dim = int(rng.integers(2, 10))
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        herm = 0.5 * (g + g.conj().T)
        spec = linalg.eig_hermitian(herm)
        rebuilt = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.conj().T
        gram = spec.eigenvectors.conj().T @ spec.eigenvectors
        worst_rec = max(worst_rec, float(np.max(np.abs(rebuilt - herm))))
        worst_orth = max(worst_orth, float(np.max(np.abs(gram - np.eye(dim)))))
    out.append(_result("eigendecomposition reconstructs input", worst_rec, 1e-9))
    out.append(_result("eigenvectors orthonormal", worst_orth, 1e-9))

    worst = 0.0
    for _ in range(100):
        da, db = _random_dims(rng)
        rho = states.random_density(da * db, seed=rng.integers(2**32))
        reduced = linalg.partial_trace(rho, da, db, "a")
        worst = max(worst, abs(np.trace(reduced).real - np.trace(rho).real))
    out.append(_result("partial trace preserves trace", worst, 1e-12))

    worst = 0.0
    for _ in range(50):
        dim = int(rng.integers(2, 8))
        rho = states.random_density(dim, seed=rng.integers(2**32))
        root = linalg.psd_sqrt(rho)
        worst = max(worst, float(np.max(np.abs(root @ root - rho))))
    out.append(_result("psd_sqrt squares back", worst, 1e-8))
    return out


def measures_suite(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []

    worst_inv = worst_add = ok_sign = 0.0
    for _ in range(100):
        dim = int(rng.integers(2, 6))
        rho = states.random_density(dim, seed=rng.integers(2**32))
        sig = states.random_density(int(rng.integers(2, 4)), seed=rng.integers(2**32))
        s = measures.vn_entropy(rho)
        ok_sign = min(ok_sign, s)
        u = _random_unitary(dim, rng)
        worst_inv = max(worst_inv, abs(measures.vn_entropy(u @ rho @ u.conj().T) - s))
        worst_add = max(
            worst_add,
            abs(
                measures.vn_entropy(linalg.tensor_product(rho, sig))
                - s
                - measures.vn_entropy(sig)
            ),
        )
    out.append(CheckResult("entropy non-negative", ok_sign >= 0.0, f"min {ok_sign:.3e}"))
    out.append(_result("entropy unitarily invariant", worst_inv, 1e-9))
    out.append(_result("entropy additive on products", worst_add, 1e-9))

    worst_prod = worst_uni = worst_mono = 0.0
    for _ in range(100):
        dim = int(rng.integers(2, 4))
        rho1 = states.random_density(dim, seed=rng.integers(2**32))
        rho2 = states.random_density(dim, seed=rng.integers(2**32))
        sig1 = states.random_density(2, seed=rng.integers(2**32))
        sig2 = states.random_density(2, seed=rng.integers(2**32))
        f = measures.fidelity(rho1, rho2)
        worst_prod = max(
            worst_prod,
            abs(
                measures.fidelity(
                    linalg.tensor_product(rho1, sig1), linalg.tensor_product(rho2, sig2)
                )
                - f * measures.fidelity(sig1, sig2)
            ),
        )
        u = _random_unitary(dim, rng)
        worst_uni = max(
            worst_uni,
            abs(measures.fidelity(u @ rho1 @ u.conj().T, u @ rho2 @ u.conj().T) - f),
        )
        chan = states.random_channel(dim, int(rng.integers(2, 5)), seed=rng.integers(2**32))
        worst_mono = max(worst_mono, f - measures.fidelity(chan(rho1), chan(rho2)))
    out.append(_result("fidelity multiplicative on products", worst_prod, 1e-8))
    out.append(_result("fidelity unitarily invariant", worst_uni, 1e-8))
    out.append(_result("fidelity monotone under channels", worst_mono, 1e-8))

    worst = 0.0
    for _ in range(50):
        dim = int(rng.integers(2, 4))
        n_outcomes = int(rng.integers(2, 4))
        psi1 = states.random_pure(dim, seed=rng.integers(2**32))
        psi2 = states.random_pure(dim, seed=rng.integers(2**32))
        iso = _random_unitary(dim * n_outcomes, rng)[:, :dim]
        kraus = [iso[k * dim : (k + 1) * dim, :] for k in range(n_outcomes)]

        def record(psi):
            parts = []
            for k, m in enumerate(kraus):
                pointer = np.zeros((n_outcomes, n_outcomes), dtype=complex)
                pointer[k, k] = 1.0
                branch = m @ psi
                parts.append(linalg.tensor_product(np.outer(branch, branch.conj()), pointer))
            return sum(parts)

        direct = measures.fidelity(record(psi1), record(psi2))
        # sqrt(p1 p2) |<a1|a2>| collapses to the raw branch overlap
        branch_sum = sum(abs((m @ psi1).conj() @ (m @ psi2)) for m in kraus)
        worst = max(worst, abs(direct - branch_sum))
    out.append(_result("measure-and-record fidelity matches branch sum", worst, 1e-8))

    worst = 0.0
    for _ in range(100):
        da, db = _random_dims(rng)
        psi = states.random_pure(da * db, seed=rng.integers(2**32))
        rho = np.outer(psi, psi.conj())
        worst = max(
            worst,
            abs(
                measures.mutual_information(rho, da, db)
                - 2.0 * measures.entanglement_entropy(psi, da, db)
            ),
        )
    out.append(_result("pure-state mutual information is twice entanglement", worst, 1e-9))

    worst = 0.0
    for _ in range(100):
        da, db = _random_dims(rng)
        rho = states.random_density(da * db, seed=rng.integers(2**32))
        d3, _ = measures.dephasing_discord(rho, da, db)
        projs, _ = measures.local_eigenbasis(rho, da, db)
        dephased = measures.dephase_local(rho, da, db, projs)
        alt = measures.vn_entropy(dephased) - measures.vn_entropy(rho)
        worst = max(worst, abs(d3 - alt))
    out.append(_result("discord equals dephased-entropy difference", worst, 1e-9))

    worst = 0.0
    for _ in range(100):
        rho = states.random_density(4, seed=rng.integers(2**32))
        d3, _ = measures.dephasing_discord(rho, 2, 2)
        worst = max(worst, measures.discord_projective_opt(rho, 2, 2) - d3)
    out.append(_result("optimized discord below dephasing discord", worst, 1e-6))

    agree = True
    for _ in range(100):
        rho = states.random_density(4, seed=rng.integers(2**32))
        entangled = measures.concurrence(rho) > 1e-8
        if entangled == measures.ppt_check(rho, 2, 2).is_ppt:
            agree = False
    out.append(CheckResult("two-qubit concurrence agrees with PPT", agree))

    worst = 0.0
    for _ in range(100):
        da, db = _random_dims(rng)
        rho = states.random_density(da * db, seed=rng.integers(2**32))
        projs, _ = measures.local_eigenbasis(rho, da, db)
        dephased = measures.dephase_local(rho, da, db, projs)
        worst = max(
            worst,
            measures.mutual_information(dephased, da, db)
            - measures.mutual_information(rho, da, db),
        )
    out.append(_result("eigenbasis dephasing never raises mutual information", worst, 1e-9))

    ok = True
    for build in (
        lambda: states.werner(0.3),
        lambda: states.bound_entangled_tiles(),
        lambda: states.classical_bipartite([[0.5, 0.0], [0.0, 0.5]]),
        lambda: states.pseudo_pure(states.random_pure(4, seed=5), 0.4),
    ):
        ok = ok and linalg.validate_density(build(), tol=1e-10).ok
    out.append(CheckResult("state factories emit valid densities", ok))

    below = measures.concurrence(states.werner(1.0 / 3.0 - 1e-6))
    above = measures.concurrence(states.werner(1.0 / 3.0 + 1e-6))
    out.append(
        CheckResult(
            "werner entanglement threshold at p = 1/3",
            below <= 1e-8 and above > 1e-8,
            f"below {below:.3e}, above {above:.3e}",
        )
    )

    tiles, _ = states.tile_basis()
    gram = np.array([[abs(u.conj() @ v) for v in tiles] for u in tiles])
    worst = float(np.max(np.abs(gram - np.eye(9))))
    out.append(_result("tile vectors orthonormal", worst, 1e-12))

    worst = 0.0
    for p in (0.0, 0.3, 0.8, 1.0):
        worst = max(
            worst,
            float(np.max(np.abs(states.pseudo_pure(states.singlet(), p) - states.werner(p)))),
        )
    out.append(_result("pseudo-pure singlet reproduces werner", worst, 1e-15))
    return out


def detector_suite(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []

    worst = 0.0
    for _ in range(1000):
        z = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        if abs(z) > 8:
            continue
        e = detector.erf_complex(z)
        worst = max(
            worst,
            abs(detector.erf_complex(-z) + e),
            abs(detector.erf_complex(z.conjugate()) - e.conjugate()),
        )
    out.append(_result("erf symmetry identities", worst, 1e-12))

    grid_w = np.linspace(0.25, 4.0, 10)
    grid_l = np.linspace(0.25, 8.0, 10)
    discrepancy = {}
    conc_worst = 0.0
    psd_ok = True
    cond2_seen = False
    d3_positive = True
    for eps0 in (1e-2, 1e-3):
        worst = 0.0
        for ws in grid_w:
            for ls in grid_l:
                e = detector.compute_elements(detector.DetectorParams(eps0, 1.0, ws, ls))
                rho = detector.assemble_rho(e, 10.0 * eps0**4)
                psd_ok = psd_ok and linalg.validate_density(rho, tol=1e-12).ok
                d3_ref, _ = measures.dephasing_discord(rho, 2, 2)
                worst = max(worst, abs(detector.discord_closed_form(e) - d3_ref))
                if eps0 == 1e-2:
                    conc_worst = max(
                        conc_worst,
                        abs(detector.xstate_concurrence(e) - measures.concurrence(rho)),
                    )
                    cond2_seen = cond2_seen or detector.xstate_entanglement_flags(e)[1]
                    d3_positive = d3_positive and detector.discord_closed_form(e) > 0.0
        discrepancy[eps0] = worst
    out.append(
        _result("closed-form discord matches generic (eps0 1e-2)", discrepancy[1e-2], 10.0 * (1e-2) ** 4)
    )
    shrink = discrepancy[1e-2] / max(discrepancy[1e-3], 1e-300)
    out.append(
        CheckResult(
            "closed-form discrepancy shrinks with eps0",
            shrink >= 50.0,
            f"shrink factor {shrink:.1f}",
        )
    )
    out.append(_result("closed-form concurrence matches spin-flip", conc_worst, 1e-7))
    out.append(CheckResult("assembled states valid after clipping", psd_ok))
    out.append(CheckResult("second entanglement alternative never fires", not cond2_seen))
    out.append(CheckResult("discord positive wherever C is nonzero", d3_positive))

    e64 = detector.compute_elements(detector.DetectorParams(1e-2, 1.0, 1.0, 64.0))
    mi = measures.mutual_information(detector.assemble_rho(e64, 1e-7), 2, 2)
    out.append(_result("factorization limit at L/sigma = 64", mi, 1e-10 + 4e-8))
    return out


SUITES: dict[str, Callable[[int], list[CheckResult]]] = {
    "core": core_suite,
    "measures": measures_suite,
    "detector": detector_suite,
}
