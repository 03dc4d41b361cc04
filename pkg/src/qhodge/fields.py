"""Differential forms on T^4 = R^4/Z^4 as truncated Fourier data.

A FormField stores one Multivector coefficient per lattice mode k with
||k||_inf <= kmax, under the convention

    omega(xi) = sum_k omega_k * exp(2 pi i k . xi).

The full (2*kmax+1)^4 mode grid is materialized densely in a fixed
lexicographic order, so every operator in the algebra is a plain (n, 16)
array transform and mode sets never need realignment.  The field is real
iff omega_{-k} = conj(omega_k) for all k.
"""

from __future__ import annotations

import json
from functools import lru_cache

import numpy as np

from .exterior import DEGREE, N_BLADES, Multivector


@lru_cache(maxsize=None)
def grid(kmax: int):
    """Cached mode bookkeeping for a given truncation.

    Returns (modes, ksq, zero_index, neg_perm): the (n, 4) integer mode
    array in lexicographic order, |k|^2 per mode, the index of k = 0, and
    the permutation sending the entry for k to the entry for -k.
    """
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    w = 2 * kmax + 1
    r = np.arange(-kmax, kmax + 1)
    modes = np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)
    ksq = np.einsum("na,na->n", modes, modes).astype(float)
    digits = modes + kmax
    idx = ((digits[:, 0] * w + digits[:, 1]) * w + digits[:, 2]) * w + digits[:, 3]
    assert np.array_equal(idx, np.arange(len(modes)))
    neg_digits = kmax - modes
    neg_perm = ((neg_digits[:, 0] * w + neg_digits[:, 1]) * w + neg_digits[:, 2]) * w + neg_digits[:, 3]
    zero_index = int(np.nonzero(ksq == 0)[0][0])
    for arr in (modes, ksq, neg_perm):
        arr.setflags(write=False)
    return modes, ksq, zero_index, neg_perm


class FormField:
    """Truncated Fourier series of a complex-valued differential form on T^4."""

    __slots__ = ("kmax", "coeffs")

    def __init__(self, kmax: int, coeffs: np.ndarray | None = None):
        self.kmax = int(kmax)
        n = (2 * self.kmax + 1) ** 4
        if coeffs is None:
            self.coeffs = np.zeros((n, N_BLADES), dtype=complex)
        else:
            coeffs = np.asarray(coeffs, dtype=complex)
            if coeffs.shape != (n, N_BLADES):
                raise ValueError(f"expected coeffs of shape {(n, N_BLADES)}, got {coeffs.shape}")
            self.coeffs = coeffs.copy()

    # -- bookkeeping ----------------------------------------------------
    @property
    def modes(self) -> np.ndarray:
        return grid(self.kmax)[0]

    @property
    def n_modes(self) -> int:
        return self.coeffs.shape[0]

    def mode_index(self, k) -> int:
        k = np.asarray(k, dtype=int).reshape(4)
        if np.abs(k).max() > self.kmax:
            raise KeyError(f"mode {tuple(k)} outside truncation kmax={self.kmax}")
        w = 2 * self.kmax + 1
        d = k + self.kmax
        return int(((d[0] * w + d[1]) * w + d[2]) * w + d[3])

    def coeff(self, k) -> Multivector:
        return Multivector(self.coeffs[self.mode_index(k)])

    def set_coeff(self, k, mv) -> None:
        c = mv.c if isinstance(mv, Multivector) else np.asarray(mv, dtype=complex)
        self.coeffs[self.mode_index(k)] = c

    def copy(self) -> "FormField":
        return FormField(self.kmax, self.coeffs)

    # -- algebra ---------------------------------------------------------
    def _check(self, other: "FormField") -> None:
        if self.kmax != other.kmax:
            raise ValueError("truncation mismatch")

    def __add__(self, other):
        self._check(other)
        return FormField(self.kmax, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return FormField(self.kmax, self.coeffs - other.coeffs)

    def __neg__(self):
        return FormField(self.kmax, -self.coeffs)

    def __mul__(self, scalar):
        return FormField(self.kmax, self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return FormField(self.kmax, self.coeffs / scalar)

    # -- geometry ---------------------------------------------------------
    def inner(self, other: "FormField") -> complex:
        """L^2 pairing; Fourier modes and blades are orthonormal."""
        self._check(other)
        return complex(np.sum(self.coeffs * np.conj(other.coeffs)))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def degree_project(self, p: int) -> "FormField":
        out = self.coeffs.copy()
        out[:, DEGREE != p] = 0.0
        return FormField(self.kmax, out)

    def degrees(self, tol: float = 0.0):
        present = np.abs(self.coeffs).max(axis=0)
        return sorted({int(DEGREE[m]) for m in range(N_BLADES) if present[m] > tol})

    def conjugate(self) -> "FormField":
        """Complex conjugate of the form (modes swap k -> -k)."""
        _, _, _, neg = grid(self.kmax)
        return FormField(self.kmax, np.conj(self.coeffs)[neg])

    def realness_defect(self) -> float:
        _, _, _, neg = grid(self.kmax)
        return float(np.abs(self.coeffs - np.conj(self.coeffs)[neg]).max())

    def is_real(self, tol: float = 1e-12) -> bool:
        return self.realness_defect() <= tol

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        entries = []
        for n in np.nonzero(np.abs(self.coeffs).sum(axis=1))[0]:
            k = [int(v) for v in self.modes[n]]
            for m in np.nonzero(self.coeffs[n])[0]:
                z = self.coeffs[n, m]
                entries.append(
                    {"k": k, "blade_mask": int(m), "re": float(z.real), "im": float(z.imag)}
                )
        return {"truncation": self.kmax, "entries": entries}

    @classmethod
    def from_dict(cls, doc: dict) -> "FormField":
        f = cls(int(doc["truncation"]))
        for e in doc["entries"]:
            n = f.mode_index(e["k"])
            f.coeffs[n, int(e["blade_mask"])] += complex(e["re"], e["im"])
        return f

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "FormField":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def __repr__(self):
        nz = int(np.count_nonzero(np.abs(self.coeffs).sum(axis=1)))
        return f"FormField(kmax={self.kmax}, nonzero_modes={nz}, degrees={self.degrees()})"


def zero_field(kmax: int) -> FormField:
    return FormField(kmax)


def single_mode(kmax: int, k, mv) -> FormField:
    """Field with one Fourier mode: mv * exp(2 pi i k . xi)."""
    f = FormField(kmax)
    f.set_coeff(k, mv)
    return f


def real_single_mode(kmax: int, k, mv) -> FormField:
    """mv * e^{2 pi i k.xi} + conjugate; a real field when mv is real."""
    f = FormField(kmax)
    f.set_coeff(k, mv)
    c = mv.c if isinstance(mv, Multivector) else np.asarray(mv, dtype=complex)
    kk = np.asarray(k, dtype=int)
    if not np.array_equal(kk, -kk):
        f.coeffs[f.mode_index(-kk)] += np.conj(c)
    return f


def random_field(
    kmax: int,
    rng: np.random.Generator,
    degree: int | None = None,
    real: bool = False,
    invariant: bool = False,
) -> FormField:
    """Seeded random field: iid complex Gaussian per (mode, blade).

    degree restricts to homogeneous blades; invariant projects each fiber
    coefficient onto the joint kernel of ad_I, ad_J, ad_K; real symmetrizes
    modes so that omega_{-k} = conj(omega_k).
    """
    n = (2 * kmax + 1) ** 4
    c = (rng.standard_normal((n, N_BLADES)) + 1j * rng.standard_normal((n, N_BLADES))) / np.sqrt(2)
    if degree is not None:
        c[:, DEGREE != degree] = 0.0
    if invariant:
        from .quaternionic import INVARIANT_PROJECTOR

        c = c @ INVARIANT_PROJECTOR.T
    f = FormField(kmax, c)
    if real:
        _, _, _, neg = grid(kmax)
        f.coeffs = (f.coeffs + np.conj(f.coeffs)[neg]) / 2
    return f
