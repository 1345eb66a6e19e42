"""Shared random-instance generators for the test corpora."""

import numpy as np

import stabcert as sc


def haar_unitary(rng, n):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian_pd(rng, n, lo=0.5, hi=3.0):
    Q = haar_unitary(rng, n)
    return Q @ np.diag(rng.uniform(lo, hi, n)) @ Q.conj().T


def random_skew(rng, n, scale=1.0):
    S = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (S - S.conj().T)


def random_coercive(rng, n, c=0.3, spread=2.0, skew=0.5):
    """Matrix whose Hermitian part has eigenvalues in [c, c + spread]."""
    Q = haar_unitary(rng, n)
    H = Q @ np.diag(rng.uniform(c, c + spread, n)) @ Q.conj().T
    return H + random_skew(rng, n, skew)


def random_rank_matrix(rng, n1, n0, r):
    """Random n1 x n0 matrix of rank exactly r (zero matrix for r = 0)."""
    if r == 0:
        return np.zeros((n1, n0), dtype=complex)
    A = rng.standard_normal((n1, r)) + 1j * rng.standard_normal((n1, r))
    B = rng.standard_normal((r, n0)) + 1j * rng.standard_normal((r, n0))
    return A @ B


def random_block_system(rng, n0, n1, r, c_gamma=0.3, identity_weights=False):
    if identity_weights:
        alpha, beta = np.eye(n0), np.eye(n1)
    else:
        alpha = random_hermitian_pd(rng, n0)
        beta = random_hermitian_pd(rng, n1)
    gamma = random_coercive(rng, n0, c=c_gamma)
    C = random_rank_matrix(rng, n1, n0, r)
    return sc.validate_system(alpha, beta, gamma, C)


def assemble_shifted(gamma, D, z):
    """The full shifted operator z I + [[gamma, 0], [0, 0]] + [[0, -D*], [D, 0]]."""
    n0 = gamma.shape[0]
    n1 = D.shape[0]
    Bz = z * np.eye(n0 + n1, dtype=complex)
    Bz[:n0, :n0] += gamma
    Bz[:n0, n0:] -= D.conj().T
    Bz[n0:, :n0] += D
    return Bz
