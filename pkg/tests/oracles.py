"""Brute-force reference implementations used to validate the closed forms.

Everything here works directly on the 2^N table of spin patterns with plain
array arithmetic: no transfer matrices, no log-domain tricks, no grouping.
Parameters are kept in ranges where e^{-beta E} fits in a double after
subtracting the ground-state energy.
"""

from __future__ import annotations

import numpy as np


def spin_table(n: int) -> np.ndarray:
    """(2^n, n) array of +-1; row index is the bit pattern, bit i = site i+1."""
    bits = (np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1
    return 1 - 2 * bits


def ring_energies(n: int, coupling: float, field: float) -> np.ndarray:
    s = spin_table(n)
    bonds = np.sum(s * np.roll(s, -1, axis=1), axis=1)
    return -coupling * bonds - field * s.sum(axis=1)


def magnetizations(n: int) -> np.ndarray:
    return spin_table(n).sum(axis=1)


def boltzmann_weights(n: int, coupling: float, field: float, beta: float) -> np.ndarray:
    energies = ring_energies(n, coupling, field)
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def partition_sum(n: int, coupling: float, field: complex, beta: float) -> complex:
    """Z with the (possibly complex) field applied to every site."""
    bonds = -ring_energies(n, coupling, 0.0)  # recovers +J * bond sum
    m = magnetizations(n)
    return complex(np.sum(np.exp(beta * (bonds + field * m))))


def gamma_enum(n: int, coupling: float, field: float, beta: float,
               alpha: float, times: np.ndarray) -> np.ndarray:
    """Decoherence function Sum_chi w(chi) e^{-2 i alpha m(chi) t} per time."""
    w = boltzmann_weights(n, coupling, field, beta)
    m = magnetizations(n)
    phases = np.exp(-2j * alpha * np.outer(np.atleast_1d(times), m))
    return phases @ w


def fugacity_coefficients(n: int, coupling: float, beta: float) -> np.ndarray:
    """p_k = zero-field Boltzmann weight of all patterns with k down spins."""
    boltz = np.exp(-beta * ring_energies(n, coupling, 0.0))
    down = ((1 - spin_table(n)) // 2).sum(axis=1)
    return np.bincount(down, weights=boltz, minlength=n + 1)


def joint_blocks_enum(a: complex, b: complex, n: int, coupling: float, field: float,
                      beta: float, alpha: float, t: float,
                      frag_sites: tuple[int, ...]) -> np.ndarray:
    """(2^fN, 2, 2) unnormalized blocks of rho_SF by summing all bath patterns."""
    w = boltzmann_weights(n, coupling, field, beta)
    m = magnetizations(n)
    keys = np.zeros(1 << n, dtype=np.int64)
    configs = np.arange(1 << n)
    for j, site in enumerate(frag_sites):
        keys |= ((configs >> (site - 1)) & 1) << j
    n_keys = 1 << len(frag_sites)
    phased = w * np.exp(-2j * alpha * m * t)
    off = (np.bincount(keys, weights=phased.real, minlength=n_keys)
           + 1j * np.bincount(keys, weights=phased.imag, minlength=n_keys))
    diag = np.bincount(keys, weights=w, minlength=n_keys)
    blocks = np.zeros((n_keys, 2, 2), dtype=complex)
    blocks[:, 0, 0] = abs(a) ** 2 * diag
    blocks[:, 1, 1] = abs(b) ** 2 * diag
    blocks[:, 0, 1] = a * np.conj(b) * off
    blocks[:, 1, 0] = np.conj(a) * b * np.conj(off)
    return blocks


def dense_joint_blocks(a: complex, b: complex, n: int, coupling: float, field: float,
                       beta: float, alpha: float, t: float,
                       n_frag: int) -> np.ndarray:
    """Blocks of rho_SF from the dense 2^{N+1} joint state, fragment = first sites.

    Builds rho_S (x) rho_B as an explicit matrix, applies the diagonal joint
    propagator, partial-traces the other N - fN sites by reshaping, and reads
    the 2x2 system block for every fragment pattern.  Memory bound: n <= 10.
    """
    if n > 10:
        raise ValueError("dense oracle limited to n <= 10")
    w = boltzmann_weights(n, coupling, field, beta)
    m = magnetizations(n)
    psi = np.array([a, b], dtype=complex)
    rho = np.kron(np.outer(psi, psi.conj()), np.diag(w).astype(complex))
    phases = np.concatenate([np.exp(-1j * alpha * m * t), np.exp(+1j * alpha * m * t)])
    rho_t = (phases[:, None] * rho) * np.conj(phases)[None, :]
    d_frag, d_rest = 1 << n_frag, 1 << (n - n_frag)
    six = rho_t.reshape(2, d_rest, d_frag, 2, d_rest, d_frag)
    reduced = np.einsum("arfbrg->afbg", six)
    blocks = np.empty((d_frag, 2, 2), dtype=complex)
    for key in range(d_frag):
        blocks[key] = reduced[:, key, :, key]
    return blocks


def von_neumann_bits(rho: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > 1e-14]
    return float(-np.sum(lam * np.log2(lam)))


def mutual_information_enum(a: complex, b: complex, n: int, coupling: float,
                            field: float, beta: float, alpha: float, t: float,
                            frag_sites: tuple[int, ...]) -> float:
    """I(S:F) in bits assembled from the three dense marginal entropies."""
    blocks = joint_blocks_enum(a, b, n, coupling, field, beta, alpha, t, frag_sites)
    rho_s = blocks.sum(axis=0)
    frag_probs = np.einsum("kii->k", blocks).real
    s_frag = float(-np.sum(frag_probs * np.log2(frag_probs)))
    s_joint = 0.0
    for block in blocks:
        lam = np.linalg.eigvalsh(block)
        lam = lam[lam > 1e-14]
        s_joint -= float(np.sum(lam * np.log2(lam)))
    return von_neumann_bits(rho_s) + s_frag - s_joint
