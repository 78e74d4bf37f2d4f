"""Schwartz-Bruhat functions on V(A_f) at finite level and their Fourier analysis.

A function is stored as (scale s, modulus C, table): f(v) = table((v/s) mod C)
for v in s*V(Zhat), zero outside.  Table values live in Z[zeta_M] (coefficient
vectors over a common root-of-unity order M) with a single rational prefactor,
so the transform

    fhat(x) = |N(s)|^-2 C^-2xi d_F^-1 * sum_u table(u) e(-<x, s u>)

is computed in exact integer arithmetic: the additive character exponent of a
pair of table indices is (omega-coefficient of det(y, u))/C, an integer mod C.
The transform sends scale s to 1/(s*C*delta) and keeps the modulus.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import Poly, cyclotomic_poly, symbols

from .field import FieldElement, NumberField

_X = symbols("x")


class SchwartzError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact cyclotomic scalars


@lru_cache(maxsize=None)
def _phi_reduction_matrix(M: int) -> np.ndarray:
    """R[j] = coefficient vector of x^j mod Phi_M(x), shape (M, deg Phi_M)."""
    coeffs = [int(c) for c in Poly(cyclotomic_poly(M, _X), _X).all_coeffs()]  # leading first
    deg = len(coeffs) - 1
    tail = [-c for c in coeffs[1:]][::-1]  # x^deg = sum tail[i] x^i, constant first
    rows = []
    cur = [0] * deg
    cur[0] = 1
    rows.append(cur[:])
    for _ in range(1, M):
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c + top * t for c, t in zip(cur, tail)]
        rows.append(cur[:])
    return np.array(rows, dtype=np.int64)


def reduce_mod_cyclotomic(vec: np.ndarray, M: int) -> np.ndarray:
    """Canonical coefficients of sum_j vec[j] zeta_M^j in the power basis."""
    R = _phi_reduction_matrix(M)
    return np.asarray(vec, dtype=np.int64) @ R


class CyclotomicValue:
    """Exact element sum c_q e^(2 pi i q), q in Q/Z, c_q in Q."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for q, c in (terms.items() if isinstance(terms, dict) else terms):
                q = Fraction(q) % 1
                c = Fraction(c)
                if c:
                    t[q] = t.get(q, Fraction(0)) + c
        self.terms = {q: c for q, c in t.items() if c}

    @staticmethod
    def rational(c) -> "CyclotomicValue":
        return CyclotomicValue({Fraction(0): Fraction(c)})

    @staticmethod
    def root_of_unity(q, c=1) -> "CyclotomicValue":
        return CyclotomicValue({Fraction(q) % 1: Fraction(c)})

    def __add__(self, other):
        o = other if isinstance(other, CyclotomicValue) else CyclotomicValue.rational(other)
        t = dict(self.terms)
        for q, c in o.terms.items():
            t[q] = t.get(q, Fraction(0)) + c
        return CyclotomicValue(t)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue({q: -c for q, c in self.terms.items()})

    def __sub__(self, other):
        o = other if isinstance(other, CyclotomicValue) else CyclotomicValue.rational(other)
        return self + (-o)

    def __mul__(self, other):
        if not isinstance(other, CyclotomicValue):
            return CyclotomicValue({q: c * Fraction(other) for q, c in self.terms.items()})
        t = {}
        for q1, c1 in self.terms.items():
            for q2, c2 in other.terms.items():
                q = (q1 + q2) % 1
                t[q] = t.get(q, Fraction(0)) + c1 * c2
        return CyclotomicValue(t)

    __rmul__ = __mul__

    def conj(self) -> "CyclotomicValue":
        return CyclotomicValue({(-q) % 1: c for q, c in self.terms.items()})

    def common_order(self) -> int:
        M = 1
        for q in self.terms:
            M = M * q.denominator // math.gcd(M, q.denominator)
        return M

    def canonical_vector(self, M: int | None = None):
        """(M, integer vector over the power basis of Z[zeta_M], denominator)."""
        M = M or self.common_order()
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        vec = np.zeros(M, dtype=np.int64)
        for q, c in self.terms.items():
            j = int(q * M)
            vec[j % M] += int(c * den)
        return M, reduce_mod_cyclotomic(vec, M), den

    def is_zero(self) -> bool:
        M, vec, _ = self.canonical_vector()
        return not vec.any()

    def is_rational(self) -> bool:
        M, vec, _ = self.canonical_vector()
        return not vec[1:].any()

    def rational_part(self) -> Fraction:
        if not self.is_rational():
            raise SchwartzError("value is not rational")
        M, vec, den = self.canonical_vector()
        return Fraction(int(vec[0]), den)

    def __eq__(self, other):
        o = other if isinstance(other, CyclotomicValue) else CyclotomicValue.rational(other)
        return (self - o).is_zero()

    def __hash__(self):
        M, vec, den = self.canonical_vector()
        return hash((M, tuple(int(v) for v in vec), den))

    def __repr__(self):
        if not self.terms:
            return "CyclotomicValue(0)"
        return "CyclotomicValue(" + " + ".join(f"{c}*e({q})" for q, c in sorted(self.terms.items())) + ")"

    def complex_value(self, prec_bits: int = 53) -> complex:
        if prec_bits <= 53:
            z = 0j
            for q, c in self.terms.items():
                z += float(c) * complex(math.cos(2 * math.pi * q), math.sin(2 * math.pi * q))
            return z
        import mpmath

        with mpmath.workprec(prec_bits):
            z = mpmath.mpc(0)
            for q, c in self.terms.items():
                coef = mpmath.mpf(c.numerator) / c.denominator
                phase = 2 * mpmath.mpf(q.numerator) / q.denominator
                z += coef * mpmath.expjpi(phase)
            return complex(z)


# ---------------------------------------------------------------------------
# symplectic trace pairing


class PairingValue:
    """<x,y> = Tr(det(x,y)) as an exact rational with its class mod 1."""

    def __init__(self, value: Fraction):
        self.value = Fraction(value)

    @property
    def mod_one(self) -> Fraction:
        return self.value % 1

    def character_value(self) -> CyclotomicValue:
        """psi_0 at the finite adeles of a global rational: e(value mod 1)."""
        return CyclotomicValue.root_of_unity(self.mod_one)

    def __eq__(self, other):
        return self.value == (other.value if isinstance(other, PairingValue) else Fraction(other))

    def __repr__(self):
        return f"PairingValue({self.value})"


def trace_pairing(x: tuple[FieldElement, FieldElement],
                  y: tuple[FieldElement, FieldElement]) -> PairingValue:
    """<x,y> = Tr_{F/Q}(x1 y2 - x2 y1); skew-symmetric and bilinear."""
    d = x[0] * y[1] - x[1] * y[0]
    return PairingValue(d.trace())


# ---------------------------------------------------------------------------
# index bookkeeping for V(Z/C) = (O/C)^2


class _IndexGrid:
    def __init__(self, field: NumberField, C: int):
        self.field = field
        self.C = C
        self.xi = 1 if field.degree == 1 else 2
        if self.xi == 1:
            self.n = C * C
            a = np.arange(self.n)
            self.A1 = a // C
            self.A2 = a % C
            self.B1 = np.zeros(self.n, dtype=np.int64)
            self.B2 = np.zeros(self.n, dtype=np.int64)
        else:
            self.n = C ** 4
            a = np.arange(self.n)
            self.B2 = a % C
            a = a // C
            self.A2 = a % C
            a = a // C
            self.B1 = a % C
            self.A1 = a // C

    def index_of(self, v) -> int:
        """v = ((a1,b1),(a2,b2)) mod C (b's ignored for Q)."""
        C = self.C
        (a1, b1), (a2, b2) = v
        if self.xi == 1:
            return (a1 % C) * C + (a2 % C)
        return (((a1 % C) * C + (b1 % C)) * C + (a2 % C)) * C + (b2 % C)

    def coords_of(self, idx: int):
        C = self.C
        if self.xi == 1:
            return ((idx // C, 0), (idx % C, 0))
        b2 = idx % C
        idx //= C
        a2 = idx % C
        idx //= C
        b1 = idx % C
        a1 = idx // C
        return ((a1, b1), (a2, b2))


@lru_cache(maxsize=None)
def _pairing_exponent_matrix(degree: int, D: int, C: int) -> np.ndarray:
    """Q[y,u] = numerator mod C of the additive-character exponent <s'y, s u>.

    Equals det(y,u) mod C for Q and the omega-coefficient of det(y,u) mod C
    for quadratic fields (exactly Tr(det(y,u)/(C*delta)) cleared of C).
    """
    from .field import construct_field

    field = construct_field(None if degree == 1 else D)
    g = _IndexGrid(field, C)
    tr = int(field.w_trace)
    A1y, B1y, A2y, B2y = (v.reshape(-1, 1) for v in (g.A1, g.B1, g.A2, g.B2))
    A1u, B1u, A2u, B2u = (v.reshape(1, -1) for v in (g.A1, g.B1, g.A2, g.B2))
    if degree == 1:
        Q = A1y * A2u - A2y * A1u
    else:
        # omega-coefficient of y1*u2 - y2*u1
        w_y1u2 = A1y * B2u + B1y * A2u + B1y * B2u * tr
        w_y2u1 = A2y * B1u + B2y * A1u + B2y * B1u * tr
        Q = w_y1u2 - w_y2u1
    return np.mod(Q, C).astype(np.int64)


# ---------------------------------------------------------------------------
# the Schwartz function model


class FractionalSchwartz:
    """Level-structured function on V(A_f) with exact cyclotomic values.

    coeffs: int64 array [n_idx, M]; value(idx) = prefactor * sum_j coeffs[idx,j] zeta_M^j.
    """

    def __init__(self, field: NumberField, scale: FieldElement, C: int,
                 coeffs: np.ndarray, prefactor: Fraction = Fraction(1), M: int | None = None):
        if C < 1:
            raise SchwartzError("modulus must be >= 1")
        if not scale:
            raise SchwartzError("scale must be nonzero")
        self.field = field
        self.scale = scale
        self.C = C
        self.grid = _IndexGrid(field, C)
        self.M = M if M is not None else (coeffs.shape[1] if coeffs.ndim == 2 else C)
        if self.M % C != 0:
            raise SchwartzError("root order M must be divisible by the modulus C")
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (self.grid.n, self.M):
            raise SchwartzError(f"coefficient tensor must be {(self.grid.n, self.M)}")
        self.coeffs = coeffs
        self.prefactor = Fraction(prefactor)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zeros(field, C: int, scale: FieldElement | int = 1, M: int | None = None):
        s = scale if isinstance(scale, FieldElement) else field.elt(scale)
        g = _IndexGrid(field, C)
        M = M or C
        return FractionalSchwartz(field, s, C, np.zeros((g.n, M), dtype=np.int64), Fraction(1), M)

    @staticmethod
    def from_rational_table(field, C: int, table: dict, scale=1):
        """table: {((a1,b1),(a2,b2)) or flat index: Fraction-like}."""
        f = FractionalSchwartz.zeros(field, C, scale)
        den = 1
        vals = {}
        for k, v in table.items():
            idx = k if isinstance(k, int) else f.grid.index_of(k)
            v = Fraction(v)
            vals[idx] = v
            den = den * v.denominator // math.gcd(den, v.denominator)
        for idx, v in vals.items():
            f.coeffs[idx, 0] = int(v * den)
        f.prefactor = Fraction(1, den)
        return f

    @staticmethod
    def delta(field, C: int, at, value=1, scale=1):
        return FractionalSchwartz.from_rational_table(field, C, {at: value}, scale)

    def copy(self) -> "FractionalSchwartz":
        return FractionalSchwartz(self.field, self.scale, self.C, self.coeffs.copy(),
                                  self.prefactor, self.M)

    # -- values ---------------------------------------------------------------

    @property
    def xi(self) -> int:
        return self.grid.xi

    def value_at_index(self, idx: int) -> CyclotomicValue:
        terms = {}
        for j in range(self.M):
            c = int(self.coeffs[idx, j])
            if c:
                terms[Fraction(j, self.M)] = self.prefactor * c
        return CyclotomicValue(terms)

    def value_at(self, v) -> CyclotomicValue:
        return self.value_at_index(self.grid.index_of(v))

    def complex_table(self) -> np.ndarray:
        """Dense complex128 values, prefactor included."""
        roots = np.exp(2j * np.pi * np.arange(self.M) / self.M)
        return (self.coeffs @ roots) * float(self.prefactor)

    def support_indices(self) -> np.ndarray:
        return np.nonzero(self.coeffs.any(axis=1))[0]

    # -- structure ------------------------------------------------------------

    def canonical_tensor(self):
        """(M, Phi_M-reduced integer tensor, prefactor) for exact comparisons."""
        red = self.coeffs @ _phi_reduction_matrix(self.M)
        return self.M, red, self.prefactor

    def equals(self, other: "FractionalSchwartz") -> bool:
        if self.field != other.field or self.C != other.C or self.scale != other.scale:
            return False
        M = self.M * other.M // math.gcd(self.M, other.M)
        a = self._embed_order(M)
        b = other._embed_order(M)
        ra = a.coeffs @ _phi_reduction_matrix(M)
        rb = b.coeffs @ _phi_reduction_matrix(M)
        pa, pb = a.prefactor, b.prefactor
        return np.array_equal(ra * (pa.numerator * pb.denominator),
                              rb * (pb.numerator * pa.denominator))

    def _embed_order(self, M: int) -> "FractionalSchwartz":
        if M == self.M:
            return self
        k = M // self.M
        coeffs = np.zeros((self.grid.n, M), dtype=np.int64)
        coeffs[:, ::k] = self.coeffs
        return FractionalSchwartz(self.field, self.scale, self.C, coeffs, self.prefactor, M)

    def refine(self, k: int) -> "FractionalSchwartz":
        """Present the same function at modulus k*C (table constant on cosets)."""
        C2 = self.C * k
        out = FractionalSchwartz.zeros(self.field, C2, self.scale, self.M * k)
        g2 = out.grid
        if self.xi == 1:
            src = (g2.A1 % self.C) * self.C + (g2.A2 % self.C)
        else:
            src = (((g2.A1 % self.C) * self.C + (g2.B1 % self.C)) * self.C
                   + (g2.A2 % self.C)) * self.C + (g2.B2 % self.C)
        out.coeffs[:, ::k] = self.coeffs[src]
        out.prefactor = self.prefactor
        return out

    # -- linear ops -------------------------------------------------------

    def _aligned(self, other: "FractionalSchwartz"):
        if self.field != other.field or self.C != other.C or self.scale != other.scale:
            raise SchwartzError("incompatible Schwartz functions")
        M = self.M * other.M // math.gcd(self.M, other.M)
        return self._embed_order(M), other._embed_order(M)

    def __add__(self, other):
        a, b = self._aligned(other)
        pa, pb = a.prefactor, b.prefactor
        den = pa.denominator * pb.denominator // math.gcd(pa.denominator, pb.denominator)
        ca = a.coeffs * (pa.numerator * (den // pa.denominator))
        cb = b.coeffs * (pb.numerator * (den // pb.denominator))
        return FractionalSchwartz(self.field, self.scale, self.C, ca + cb,
                                  Fraction(1, den), a.M)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c) -> "FractionalSchwartz":
        out = self.copy()
        out.prefactor = self.prefactor * Fraction(c)
        return out


def fourier_transform(f: FractionalSchwartz) -> FractionalSchwartz:
    """Finite adelic Fourier transform; self-inverse on this family.

    Output scale 1/(s*C*delta); same modulus; exact integer matmuls (values
    stay below 2^53 by construction at desk scale, asserted).
    """
    field = f.field
    C, M = f.C, f.M
    Q = _pairing_exponent_matrix(field.degree, field.D, C)
    step = M // C
    n = f.grid.n
    bound = np.abs(f.coeffs).max(initial=0)
    if bound * n >= 2 ** 52:
        raise SchwartzError("transform coefficients too large for exact float matmul")
    out = np.zeros((n, M), dtype=np.float64)
    Tf = f.coeffs.astype(np.float64)
    for c in range(C):
        mask = (Q == c).astype(np.float64)
        if not mask.any():
            continue
        # multiply by zeta^(-c): coefficient j of the result reads input j+c*step
        rolled = np.roll(Tf, -c * step, axis=1)
        out += mask @ rolled
    outi = np.rint(out)
    if not np.all(np.abs(out - outi) < 1e-6):
        raise SchwartzError("exactness guard tripped in transform")
    ns = f.scale.norm()
    # kappa = |N(s)|^-2 C^-2xi d_F^-1, the volume of s*C*V(Zhat)
    kappa = Fraction(ns.denominator ** 2, ns.numerator ** 2) \
        * Fraction(1, C ** (2 * field.degree) * field.discriminant)
    new_scale = (f.scale * field.elt(C) * field.different_generator).inverse()
    return FractionalSchwartz(field, new_scale, C, outi.astype(np.int64),
                              f.prefactor * kappa, M)


def act_group(g, f: FractionalSchwartz, det_inverse: bool = False) -> FractionalSchwartz:
    """(f.g)(v) = f(g v) for a 2x2 matrix over O (entries FieldElement or int),
    with det(g) invertible modulo C.  det_inverse applies g/det(g) instead
    (the adjoint-inverse action used by the equivariance law)."""
    field = f.field
    C = f.C
    from .classfield import ResidueRing

    ring = ResidueRing(field, C)

    def as_res(x):
        if isinstance(x, FieldElement):
            return ring.reduce(x)
        return (int(x) % C, 0)

    a, b, c, d = (as_res(g[0][0]), as_res(g[0][1]), as_res(g[1][0]), as_res(g[1][1]))
    det = _res_sub(ring.mul(a, d), ring.mul(b, c), C)
    if not ring.is_unit(det):
        raise SchwartzError("matrix determinant not invertible at the level")
    mul = ring.one
    if det_inverse:
        mul = ring.inv(det)
    # image index of v: g v (then scaled by det^-1 if requested)
    gr = f.grid
    A1, B1, A2, B2 = gr.A1, gr.B1, gr.A2, gr.B2
    v1 = np.stack([A1, B1], axis=1)
    v2 = np.stack([A2, B2], axis=1)
    w1 = _res_mat_vec(ring, a, v1, b, v2)
    w2 = _res_mat_vec(ring, c, v1, d, v2)
    if det_inverse:
        w1 = _res_scalar_vec(ring, mul, w1)
        w2 = _res_scalar_vec(ring, mul, w2)
    if f.xi == 1:
        src = (w1[:, 0] % C) * C + (w2[:, 0] % C)
    else:
        src = (((w1[:, 0] % C) * C + w1[:, 1] % C) * C + w2[:, 0] % C) * C + w2[:, 1] % C
    out = f.copy()
    out.coeffs = f.coeffs[src]
    return out


def det_norm_factor(g, f: FractionalSchwartz) -> Fraction:
    """||det g||_f^-1 for the level-local action: the part of |N(det g)|
    supported on primes dividing the modulus (1 whenever the action is
    admissible, since det must be a unit at those primes)."""
    field = f.field
    a, b, c, d = g[0][0], g[0][1], g[1][0], g[1][1]
    to_elt = lambda x: x if isinstance(x, FieldElement) else field.elt(x)
    det = to_elt(a) * to_elt(d) - to_elt(b) * to_elt(c)
    n = abs(det.norm())
    num = n.numerator
    part = 1
    for p in set(_prime_factors(f.C)):
        while num % p == 0:
            num //= p
            part *= p
    return Fraction(part)


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def scale_by_residue(r, f: FractionalSchwartz) -> FractionalSchwartz:
    """f(r v) for a unit residue r in (O/C)^x: scalar idele action on the table."""
    from .classfield import ResidueRing

    ring = ResidueRing(f.field, f.C)
    rr = r if isinstance(r, tuple) else (int(r) % f.C, 0)
    if not ring.is_unit(rr):
        raise SchwartzError("residue not invertible at the level")
    gr = f.grid
    v1 = np.stack([gr.A1, gr.B1], axis=1)
    v2 = np.stack([gr.A2, gr.B2], axis=1)
    w1 = _res_scalar_vec(ring, rr, v1)
    w2 = _res_scalar_vec(ring, rr, v2)
    C = f.C
    if f.xi == 1:
        src = (w1[:, 0] % C) * C + (w2[:, 0] % C)
    else:
        src = (((w1[:, 0] % C) * C + w1[:, 1] % C) * C + w2[:, 0] % C) * C + w2[:, 1] % C
    out = f.copy()
    out.coeffs = f.coeffs[src]
    return out


def _res_sub(u, v, C):
    return ((u[0] - v[0]) % C, (u[1] - v[1]) % C)


def _res_mat_vec(ring, coef1, vecs1, coef2, vecs2):
    """coef1 * v1 + coef2 * v2 elementwise over index arrays of (a,b) rows."""
    C = ring.N
    tr, nm = ring.tr, ring.nm
    a1, b1 = coef1
    a2, b2 = coef2
    x1, y1 = vecs1[:, 0], vecs1[:, 1]
    x2, y2 = vecs2[:, 0], vecs2[:, 1]
    ra = (a1 * x1 - b1 * y1 * nm + a2 * x2 - b2 * y2 * nm) % C
    rb = (a1 * y1 + b1 * x1 + b1 * y1 * tr + a2 * y2 + b2 * x2 + b2 * y2 * tr) % C
    return np.stack([ra, rb], axis=1)


def _res_scalar_vec(ring, coef, vecs):
    C = ring.N
    tr, nm = ring.tr, ring.nm
    a, b = coef
    x, y = vecs[:, 0], vecs[:, 1]
    ra = (a * x - b * y * nm) % C
    rb = (a * y + b * x + b * y * tr) % C
    return np.stack([ra, rb], axis=1)


# ---------------------------------------------------------------------------
# the twisted family and the trace-zero condition


class TwistedSchwartz:
    """phi(v, g) = f(v) * eta(det g) * (||det g||_f sgn(N det g))^n."""

    def __init__(self, base: FractionalSchwartz, eta=None, n: int = 0):
        self.base = base
        self.eta = eta
        self.n = n


def is_S0(phi) -> bool:
    """f(0) = 0 and sum over the table = 0 (the total-integral condition)."""
    f = phi.base if isinstance(phi, TwistedSchwartz) else phi
    zero_idx = f.grid.index_of(((0, 0), (0, 0)))
    at0 = reduce_mod_cyclotomic(f.coeffs[zero_idx], f.M)
    if at0.any():
        return False
    total = reduce_mod_cyclotomic(f.coeffs.sum(axis=0), f.M)
    return not total.any()


# ---------------------------------------------------------------------------
# text serialization (CLI and cache)


def serialize_schwartz(f: FractionalSchwartz) -> str:
    lines = []
    D = "Q" if f.field.degree == 1 else str(f.field.D)
    s = f.scale
    scoord = f"{s.a.numerator}:{s.a.denominator}:{s.b.numerator}:{s.b.denominator}"
    lines.append(f"schwartz v1 D={D} s={scoord} C={f.C} M={f.M} "
                 f"pref={f.prefactor.numerator}/{f.prefactor.denominator}")
    for idx in f.support_indices():
        row = f.coeffs[idx]
        ent = " ".join(f"{j}:{int(row[j])}" for j in range(f.M) if row[j])
        lines.append(f"{int(idx)} {ent}")
    return "\n".join(lines) + "\n"


def parse_schwartz(text: str) -> FractionalSchwartz:
    from .field import construct_field

    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "schwartz" or head[1] != "v1":
        raise SchwartzError("bad serialization header")
    kv = dict(part.split("=", 1) for part in head[2:])
    field = construct_field(None if kv["D"] == "Q" else int(kv["D"]))
    an, ad, bn, bd = (int(t) for t in kv["s"].split(":"))
    scale = field.elt(Fraction(an, ad), Fraction(bn, bd))
    C, M = int(kv["C"]), int(kv["M"])
    pn, pd = kv["pref"].split("/")
    f = FractionalSchwartz.zeros(field, C, scale, M)
    f.prefactor = Fraction(int(pn), int(pd))
    for ln in lines[1:]:
        parts = ln.split()
        idx = int(parts[0])
        for ent in parts[1:]:
            j, c = ent.split(":")
            f.coeffs[idx, int(j)] = int(c)
    return f
