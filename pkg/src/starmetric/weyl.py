"""Finite-N Heisenberg-Weyl algebra: clock/shift matrices, the operator <->
torus-function transform, and the discrete star product.

This is the brute-force oracle for the continuum star calculus: the
function-level star product must agree with matrix multiplication under the
transform.  Floating-point roots of unity with explicit tolerances are
deliberate; exactness lives in the continuum modules, cross-validation here.

The discrete phase phi = 2 pi / N plays the role of hbar (the basis rule
e^{-i phi m n'} mirrors the continuum monomial rule); no formal limit is
taken anywhere.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Tuple

import numpy as np


class SizeMismatch(ValueError):
    """Two torus functions with different N were combined."""


class TorusFunction:
    """Fourier data of an operator: entry (n, m) multiplies e^{i n alpha} e^{i m beta}."""

    __slots__ = ("n", "fourier")

    def __init__(self, n: int, fourier: np.ndarray):
        fourier = np.asarray(fourier, dtype=complex)
        if fourier.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} grid, got {fourier.shape}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "fourier", fourier)

    def __setattr__(self, name, value):
        raise AttributeError("TorusFunction is immutable")

    @classmethod
    def zero(cls, n: int) -> "TorusFunction":
        return cls(n, np.zeros((n, n), dtype=complex))

    @classmethod
    def basis(cls, n: int, i: int, j: int) -> "TorusFunction":
        grid = np.zeros((n, n), dtype=complex)
        grid[i % n, j % n] = 1.0
        return cls(n, grid)

    def max_abs_diff(self, other: "TorusFunction") -> float:
        if self.n != other.n:
            raise SizeMismatch(f"N = {self.n} vs {other.n}")
        return float(np.max(np.abs(self.fourier - other.fourier)))


def clock_shift(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """g = diag(1, w, ..., w^{N-1}) with w = e^{2 pi i/N}; h the cyclic raise,
    h e_k = e_{k+1 mod N}.  Then g h = e^{i phi} h g and g^N = h^N = 1."""
    if n < 2:
        raise ValueError("N must be at least 2")
    omega = np.exp(2j * np.pi / n)
    g = np.diag(omega ** np.arange(n))
    h = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    return g, h


@lru_cache(maxsize=32)
def _basis_ops(n: int) -> np.ndarray:
    g, h = clock_shift(n)
    gs = [np.linalg.matrix_power(g, k) for k in range(n)]
    hs = [np.linalg.matrix_power(h, k) for k in range(n)]
    return np.array([[gs[i] @ hs[j] for j in range(n)] for i in range(n)])


def op_to_fun(a: np.ndarray) -> TorusFunction:
    """Fourier coefficients a_{n,m} = tr((g^n h^m)^dagger A) / N."""
    n = a.shape[0]
    basis = _basis_ops(n)
    grid = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            grid[i, j] = np.trace(basis[i, j].conj().T @ a) / n
    return TorusFunction(n, grid)


def fun_to_op(f: TorusFunction) -> np.ndarray:
    basis = _basis_ops(f.n)
    out = np.zeros((f.n, f.n), dtype=complex)
    for i in range(f.n):
        for j in range(f.n):
            c = f.fourier[i, j]
            if c:
                out += c * basis[i, j]
    return out


def discrete_star(f: TorusFunction, g: TorusFunction) -> TorusFunction:
    """Bilinear extension of the basis rule

    (e^{i n a} e^{i m b}) * (e^{i n' a} e^{i m' b})
        = e^{-i phi m n'} e^{i (n+n') a} e^{i (m+m') b},

    exponents reduced mod N (g^N = h^N = 1 exactly).  The phase matches the
    reordering g^n h^m g^{n'} h^{m'} = e^{-i phi m n'} g^{n+n'} h^{m+m'}.
    """
    if f.n != g.n:
        raise SizeMismatch(f"N = {f.n} vs {g.n}")
    n = f.n
    phi = 2.0 * np.pi / n
    out = np.zeros((n, n), dtype=complex)
    fi, fj = np.nonzero(f.fourier)
    gi, gj = np.nonzero(g.fourier)
    for i1, j1 in zip(fi, fj):
        c1 = f.fourier[i1, j1]
        for i2, j2 in zip(gi, gj):
            phase = np.exp(-1j * phi * j1 * i2)
            out[(i1 + i2) % n, (j1 + j2) % n] += c1 * g.fourier[i2, j2] * phase
    return TorusFunction(n, out)


def discrete_dagger(f: TorusFunction) -> TorusFunction:
    """Image of the operator adjoint: entry (n, m) goes to the conjugate at
    (-n mod N, -m mod N) with phase e^{-i phi n m} from reordering
    (g^n h^m)^dagger = e^{-i phi n m} g^{-n} h^{-m}."""
    n = f.n
    phi = 2.0 * np.pi / n
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            c = f.fourier[i, j]
            if c:
                out[(-i) % n, (-j) % n] += np.conj(c) * np.exp(-1j * phi * i * j)
    return TorusFunction(n, out)


def discrete_is_hermitian(f: TorusFunction, tol: float = 1e-10) -> bool:
    return f.max_abs_diff(discrete_dagger(f)) <= tol


def random_operator(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def isomorphism_trial(n: int, rng: np.random.Generator) -> float:
    """Max deviation of op_to_fun(A B) from the discrete star of the images."""
    a = random_operator(n, rng)
    b = random_operator(n, rng)
    lhs = op_to_fun(a @ b)
    rhs = discrete_star(op_to_fun(a), op_to_fun(b))
    return lhs.max_abs_diff(rhs)


def oracle_run(n: int, trials: int, seed: int, tol: float = 1e-10) -> dict:
    """Batch isomorphism + adjoint trials; the CLI surface of this module."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    passes = 0
    for _ in range(trials):
        dev = isomorphism_trial(n, rng)
        a = random_operator(n, rng)
        dev = max(dev, op_to_fun(a.conj().T).max_abs_diff(discrete_dagger(op_to_fun(a))))
        worst = max(worst, dev)
        passes += dev <= tol
    return {
        "n": n,
        "trials": trials,
        "passes": passes,
        "failures": trials - passes,
        "max_deviation": worst,
        "tolerance": tol,
    }
