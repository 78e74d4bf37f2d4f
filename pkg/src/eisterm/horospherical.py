"""The horospherical map, Hecke L Euler products, spherical functions and the
averaging projector over SL2(O/N), and the constructive preimage.

The map is evaluated through the unfolded orbit sum

    rho(phi)(g) = c_N * sum_{l in F^x/O^x(N)+} fhat(ghat l e1) / N(l)^(m+2),
    c_N = h_N Gamma(m+2)^xi / ((-2 pi i)^(xi(m+2)) 2^xi sqrt(d_F) Phi(N)),

with Phi(N) = |(O/N)^x| (the multiplicative volume of the level subgroup),
which agrees with the sum over sign-constrained ray characters of the finite
Tate integrals.  ghat e1 only moves the highest-weight line, so one vector of
per-class norm-power sums serves every group translate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .field import NumberField, construct_field, prime_ideals_up_to
from .classfield import (
    GroupCharacter,
    HeckeCharacterData,
    RayClassGroup,
    ResidueRing,
    all_characters,
)
from .schwartz import FractionalSchwartz, TwistedSchwartz, fourier_transform, is_S0
from .eisenstein import PreconditionError, rank1_class_sums, rank2_class_sums


class HorosphericalError(ValueError):
    pass


class ResourceError(HorosphericalError):
    pass


# ---------------------------------------------------------------------------
# finite matrix groups over O/N


class MatrixGroup:
    """GL2(O/N) with its SL2 subgroup, enumerated at desk scale."""

    SL2_BUDGET = 200_000

    def __init__(self, field: NumberField, N: int):
        self.field = field
        self.N = N
        self.ring = ResidueRing(field, N)
        xi = 1 if field.degree == 1 else 2
        if (xi == 2 and N > 4) or (xi == 1 and N > 12):
            order_bound = (N ** (2 * xi)) ** 2
            raise ResourceError(
                f"SL2(O/{N}) enumeration beyond the desk budget (|O/N|^4 = {order_bound})"
            )
        self._enumerate()

    def _enumerate(self):
        ring = self.ring
        elems = ring.elements()
        gl, sl = [], []
        for a in elems:
            for b in elems:
                for c in elems:
                    for d in elems:
                        det = _rsub(ring, ring.mul(a, d), ring.mul(b, c))
                        if not ring.is_unit(det):
                            continue
                        mat = (a, b, c, d)
                        gl.append(mat)
                        if det == ring.one:
                            sl.append(mat)
        self.gl2 = gl
        self.sl2 = sl

    def det(self, mat):
        ring = self.ring
        a, b, c, d = mat
        return _rsub(ring, ring.mul(a, d), ring.mul(b, c))

    def mul(self, m1, m2):
        ring = self.ring
        a, b, c, d = m1
        e, f, g, h = m2
        return (
            _radd(ring, ring.mul(a, e), ring.mul(b, g)),
            _radd(ring, ring.mul(a, f), ring.mul(b, h)),
            _radd(ring, ring.mul(c, e), ring.mul(d, g)),
            _radd(ring, ring.mul(c, f), ring.mul(d, h)),
        )

    def inv(self, mat):
        ring = self.ring
        a, b, c, d = mat
        det = self.det(mat)
        di = ring.inv(det)
        neg = lambda u: ((-u[0]) % ring.N, (-u[1]) % ring.N)
        return (ring.mul(di, d), ring.mul(di, neg(b)),
                ring.mul(di, neg(c)), ring.mul(di, a))

    def hat_inverse_column(self, mat, ring=None):
        """ghat^-1 e1 = det(g)^-1 (first column of g): the direction moved
        along the highest-weight line by the group element.  ring selects the
        modulus (defaults to the group's own); mat entries are taken as the
        canonical integral lift."""
        ring = ring or self.ring
        a, b, c, d = mat
        det = _rsub(ring, ring.mul(a, d), ring.mul(b, c))
        di = ring.inv(det)
        return (ring.mul(di, a), ring.mul(di, c))

    def primitive_vectors(self):
        """Columns (v1, v2) extendable to GL2: one per G/P coset."""
        ring = self.ring
        elems = ring.elements()
        out = []
        for v1 in elems:
            for v2 in elems:
                w = self._complete((v1, v2))
                if w is not None:
                    out.append((v1, v2))
        return out

    def _complete(self, v):
        ring = self.ring
        v1, v2 = v
        for w1 in ring.elements():
            for w2 in ring.elements():
                det = _rsub(ring, ring.mul(v1, w2), ring.mul(w1, v2))
                if ring.is_unit(det):
                    return (v1, w1, v2, w2)
        return None

    def completion_matrix(self, v):
        mat = self._complete(v)
        if mat is None:
            raise HorosphericalError("vector is not primitive")
        return mat


def _radd(ring, u, v):
    return ((u[0] + v[0]) % ring.N, (u[1] + v[1]) % ring.N)


def _rsub(ring, u, v):
    return ((u[0] - v[0]) % ring.N, (u[1] - v[1]) % ring.N)


@lru_cache(maxsize=None)
def matrix_group(degree: int, D: int, N: int) -> MatrixGroup:
    return MatrixGroup(construct_field(None if degree == 1 else D), N)


def _lift_matrix(mat, N: int, C: int):
    """Lift a mod-N matrix to a mod-C matrix invertible at every prime of C:
    the canonical entries where the primes of C divide N, the identity at the
    new primes (CRT coordinatewise on the omega-basis)."""
    if C == N:
        return mat
    R = C
    Np = 1
    n = N
    # split C into the part sharing primes with N and the rest
    for p in range(2, C + 1):
        if C % p == 0 and N % p == 0:
            while R % p == 0:
                R //= p
                Np *= p
    if R == 1:
        return mat  # same primes: unit determinants lift to units
    ident = ((1, 0), (0, 0), (0, 0), (1, 0))

    def crt_pair(u, v):
        # x = u mod Np', x = v mod R, coordinatewise; Np' = C // R
        Npart = C // R
        out = []
        for i in range(2):
            g, s, t = _egcd(Npart, R)
            x = (u[i] % Npart) * t * R + (v[i] % R) * s * Npart
            out.append(x % C)
        return tuple(out)

    lifted = []
    for entry, ide in zip(mat, ident):
        # entry is a residue pair mod N; embed mod Npart = same primes part
        lifted.append(crt_pair(entry, ide))
    return tuple(lifted)


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def sl2_order(field: NumberField, N: int) -> int:
    return len(matrix_group(field.degree, field.D, N).sl2)


# ---------------------------------------------------------------------------
# induced functions and the spherical projector


@dataclass
class SphericalData:
    """Marker for the line C*S(phi): the function that is 1 on SL2(Ohat)."""

    data: HeckeCharacterData


class IndFunction:
    """Function on G(O/N) with the right Borel transformation law
    psi(x b) = psi(x) * eta(t1 t2) chi'(t2) for b upper triangular."""

    def __init__(self, group: MatrixGroup, data: HeckeCharacterData, table: dict):
        self.group = group
        self.data = data
        self.table = table

    @property
    def level(self):
        return self.group.N

    def value(self, mat) -> complex:
        return self.table[mat]

    def borel_factor(self, t1, t2) -> complex:
        """eta(t1 t2) chi'(t2) at unit residues with positive signs."""
        rc = self.data.rc
        plus = tuple([1] * rc.sign_count)
        c1 = rc._rep_map[(t1, plus)]
        c2 = rc._rep_map[(t2, plus)]
        q = self.data.phi_tilde_exponent(c1, c2)
        return cmath.exp(2j * cmath.pi * float(q))

    def check_law(self, samples: int = 50, seed: int = 0) -> bool:
        import random

        rng = random.Random(seed)
        ring = self.group.ring
        units = ring.units()
        mats = self.group.gl2
        for _ in range(samples):
            x = rng.choice(mats)
            t1, t2 = rng.choice(units), rng.choice(units)
            u = rng.choice(ring.elements())
            b = (t1, ring.mul(t1, u), (0, 0), t2)
            xb = self.group.mul(x, b)
            lhs = self.table[xb]
            rhs = self.table[x] * self.borel_factor(t1, t2)
            if abs(lhs - rhs) > 1e-9 * (1 + abs(lhs)):
                return False
        return True


def spherical_function(group: MatrixGroup, data: HeckeCharacterData) -> IndFunction:
    """S(phi): 1 on SL2, extended by the Borel law; needs spherical type."""
    if not data.is_spherical_type():
        raise HorosphericalError("S(phi) requires m = 0 and trivial chi'")
    ring = group.ring
    table = {}
    for mat in group.gl2:
        det = group.det(mat)
        # mat = x * diag(1, det) with x in SL2: S = eta(det) chi'(det)
        table[mat] = IndFunction(group, data, {}).borel_factor(ring.one, det)
    return IndFunction(group, data, table)


def induced_from_coset_values(group: MatrixGroup, data: HeckeCharacterData,
                              coset_values) -> IndFunction:
    """Build psi from free values on G/B cosets, extended by the law.

    coset_values: list of complex, one per projective primitive column class
    (deterministic enumeration order).
    """
    ring = group.ring
    units = ring.units()
    # G/B cosets keyed by projective class of the first column
    def proj_key(v1, v2):
        best = None
        for t in units:
            cand = (ring.mul(t, v1), ring.mul(t, v2))
            if best is None or cand < best:
                best = cand
        return best

    cosets = {}
    for mat in group.gl2:
        key = proj_key(mat[0], mat[2])
        cosets.setdefault(key, []).append(mat)
    keys = sorted(cosets)
    if len(coset_values) != len(keys):
        raise HorosphericalError(f"need {len(keys)} coset values")
    table = {}
    proto = IndFunction(group, data, {})
    for key, val in zip(keys, coset_values):
        rep = min(cosets[key])
        rep_inv = group.inv(rep)
        for mat in cosets[key]:
            b = group.mul(rep_inv, mat)  # upper triangular
            if b[2] != (0, 0):
                raise HorosphericalError("coset decomposition failed")
            t1, t2 = b[0], b[3]
            table[mat] = val * proto.borel_factor(t1, t2)
    return IndFunction(group, data, table)


def coset_count(group: MatrixGroup) -> int:
    ring = group.ring
    units = ring.units()
    seen = set()
    for mat in group.gl2:
        v1, v2 = mat[0], mat[2]
        best = None
        for t in units:
            cand = (ring.mul(t, v1), ring.mul(t, v2))
            if best is None or cand < best:
                best = cand
        seen.add(best)
    return len(seen)


def spherical_S(data: HeckeCharacterData, torus_t1, torus_t2,
                t2_norm_f=Fraction(1), t2_sign: int = 1) -> complex:
    """S(phi) at g = k * b with k in SL2(Ohat) and b the torus data: the value
    phi~_f(t1, t2), independent of the SL2 part."""
    rc = data.rc
    plus = tuple([1] * rc.sign_count)
    c1 = rc._rep_map[(torus_t1, plus)]
    c2 = rc._rep_map[(torus_t2, plus)]
    return data.phi_tilde_value(c1, c2, t2_norm_f, t2_sign)


def psi_project(psi: IndFunction):
    """Averaging projector onto the spherical line: the exact mean of the
    table over SL2(O/N); idempotent on spherical inputs."""
    group = psi.group
    n = len(group.sl2)
    acc = 0j
    for s in group.sl2:
        acc += psi.table[s]
    coeff = acc / n
    return coeff, SphericalData(psi.data)


# ---------------------------------------------------------------------------
# Euler products


@dataclass
class TateFactorization:
    """(1/sqrt(d_F)) * ramified part * unramified Euler product at s."""

    constant: float
    ramified: complex
    euler_value: complex
    tail_bound: float
    prime_bound: int

    @property
    def value(self) -> complex:
        return self.constant * self.ramified * self.euler_value


def hecke_L_partial(field: NumberField, rc: RayClassGroup, chi: GroupCharacter,
                    s: float, P: int = 10_000) -> TateFactorization:
    """(1/sqrt d_F) prod over prime ideals of norm <= P, coprime to the level,
    of (1 - chi(p) Np^-s)^-1, with a crude positive tail bound."""
    if s <= 1:
        raise PreconditionError("Euler product needs s > 1")
    prod = complex(1.0)
    for (np_, ideal) in prime_ideals_up_to(field, P):
        # skip primes dividing the level: p | (N) iff N lies in p
        if rc.N > 1 and ideal.contains(field.elt(rc.N)):
            continue
        chi_val = chi.value(rc.class_of_ideal(ideal))
        prod *= 1.0 / (1.0 - chi_val * np_ ** (-s))
    # tail: log prod over Np > P bounded by sum 2 Np^-s <= 2 * integral
    tail = 2.0 * 2.0 * P ** (1 - s) / (s - 1) / math.log(max(P, 2))
    return TateFactorization(1.0 / math.sqrt(field.discriminant), 1.0, prod, tail, P)


def lambda_constant(rc: RayClassGroup, chi_prime: GroupCharacter, m: int,
                    P: int = 10_000) -> complex:
    """Lambda_N(chi, m+2) = |Cl^(N)| Gamma(m+2)^xi / (-2 pi i)^(xi(m+2)) * Tate integral."""
    field = rc.field
    xi = field.degree
    k = m + 2
    tate = hecke_L_partial(field, rc, chi_prime, float(k), P)
    pref = rc.order * math.gamma(k) ** xi / ((-2j * math.pi) ** (xi * k))
    return pref * tate.value


# ---------------------------------------------------------------------------
# the horospherical map


def _unfold_constant(field: NumberField, rc: RayClassGroup, m: int) -> complex:
    """c_N = h_N Gamma(k)^xi / ((-2 pi i)^(xi k) 2^xi sqrt(d_F) Phi(N))."""
    xi = field.degree
    k = m + 2
    phiN = len(rc.ring.units())
    return (rc.order * math.gamma(k) ** xi
            / ((-2j * math.pi) ** (xi * k) * 2 ** xi
               * math.sqrt(field.discriminant) * phiN))


def _line_sums(field: NumberField, N: int, C: int, k: int, B, precision: int):
    """Z[lam] = sum over orbit reps of the lam-class of N(w)^-k (w-lattice)."""
    if field.degree == 1:
        Z = rank1_class_sums(C, k, min(precision, 64))
        return np.array([complex(z) for z in Z])
    Zt, _, _ = rank2_class_sums(field.D, N, C, k, int(B))
    return np.array(Zt, dtype=np.complex128)


def horospherical_map(phi, m: int, rc: RayClassGroup, mats, B=2e4,
                      precision: int = 64) -> list[complex]:
    """rho(phi) sampled at integral matrix representatives (mod N).

    phi: TwistedSchwartz or FractionalSchwartz with the trace-zero property.
    Returns one complex value per matrix in mats.
    """
    f = phi.base if isinstance(phi, TwistedSchwartz) else phi
    eta = phi.eta if isinstance(phi, TwistedSchwartz) else None
    if not is_S0(f):
        raise PreconditionError("the horospherical map is defined on S^0")
    field = f.field
    k = m + 2
    fh = fourier_transform(f)
    C = fh.C
    group = matrix_group(field.degree, field.D, rc.N)
    if rc.N != C and C % rc.N != 0:
        raise HorosphericalError("level of phi incompatible with the group level")
    Z = _line_sums(field, rc.N, C, k, B, precision)
    cN = _unfold_constant(field, rc, m)
    tbl = fh.complex_table()
    sprime_nk = float(fh.scale.norm()) ** k if field.degree == 2 \
        else float(fh.scale.a) ** k
    ring = ResidueRing(field, C)
    out = []
    for mat in mats:
        lifted = _lift_matrix(mat, rc.N, C)
        w0 = group.hat_inverse_column(lifted, ring)
        # indices of lam * w0 over lam in O/C
        acc = 0j
        if field.degree == 1:
            for lam in range(C):
                idx = (lam * w0[0][0] % C) * C + (lam * w0[1][0] % C)
                v = tbl[idx]
                if v:
                    acc += v * Z[lam]
        else:
            for la in range(C):
                for lb in range(C):
                    lam = (la, lb)
                    i1 = ring.mul(lam, w0[0])
                    i2 = ring.mul(lam, w0[1])
                    idx = ((i1[0] * C + i1[1]) * C + i2[0]) * C + i2[1]
                    v = tbl[idx]
                    if v:
                        acc += v * Z[la * C + lb]
        val = cN * acc / sprime_nk
        if eta is not None:
            det = group.det(mat)
            plus = tuple([1] * rc.sign_count)
            val *= cmath.exp(2j * cmath.pi * float(eta.exponent_at(rc._rep_map[(det, plus)])))
        out.append(complex(val))
    return out


def kernel_coefficient(phi, m: int, rc: RayClassGroup, B=2e4,
                       precision: int = 64) -> complex:
    """Average of rho(phi) over SL2(O/N): the spherical projector coefficient
    of the image (zero on the image of the trace-zero space)."""
    group = matrix_group(rc.field.degree, rc.field.D, rc.N)
    vals = horospherical_map(phi, m, rc, group.sl2, B, precision)
    return complex(sum(vals) / len(vals))


# ---------------------------------------------------------------------------
# the constructive preimage


def _class_representatives(rc: RayClassGroup):
    """One (residue, signs) representative per ray class (trivial ideal part)."""
    reps = {}
    for key, coords in rc._rep_map.items():
        if coords not in reps:
            reps[coords] = key
    return [reps[c] for c in sorted(reps)]


def s_psi_bar(psi: IndFunction) -> FractionalSchwartz:
    """The zero-extension Schwartz function of the det-untwisted psi:
    supported on primitive-vector cosets x e1 + N V(Zhat), value psibar(x)."""
    group = psi.group
    field = group.field
    N = group.N
    ring = group.ring
    data = psi.data
    rc = data.rc
    plus = tuple([1] * rc.sign_count)
    f = FractionalSchwartz.zeros(field, N)
    # complex-valued table: store via rational approximation is wrong; use a
    # dense complex table carried separately
    values = np.zeros(f.grid.n, dtype=np.complex128)
    for v in group.primitive_vectors():
        x = group.completion_matrix(v)
        det = group.det(x)
        dcls = rc._rep_map[(det, plus)]
        # psibar(x) = eta(det x)^-1 chi'(det x)^-1 psi(x)
        q = (data.eta.exponent_at(dcls) + data.chi_prime.exponent_at(dcls)) % 1
        val = psi.value(x) * cmath.exp(-2j * cmath.pi * float(q))
        idx = f.grid.index_of((v[0], v[1]))
        values[idx] = val
    return _complex_schwartz(field, N, values)


class ComplexSchwartz:
    """Complex-valued level table with the same transform semantics.

    Used on the preimage path where character values are genuinely complex;
    carries a dense complex table plus the scale/modulus bookkeeping of the
    exact model.
    """

    def __init__(self, field, scale, C, values: np.ndarray):
        base = FractionalSchwartz.zeros(field, C, scale)
        self.field = field
        self.scale = scale if not isinstance(scale, int) else field.elt(scale)
        self.C = C
        self.grid = base.grid
        self.values = values

    @property
    def xi(self):
        return 1 if self.field.degree == 1 else 2


def _complex_schwartz(field, C, values) -> ComplexSchwartz:
    return ComplexSchwartz(field, field.one, C, values)


def complex_fourier_transform(f: ComplexSchwartz) -> ComplexSchwartz:
    """Transform of a dense complex table (same kernel as the exact model)."""
    from .schwartz import _pairing_exponent_matrix

    field = f.field
    C = f.C
    Q = _pairing_exponent_matrix(field.degree, field.D, C)
    roots = np.exp(-2j * np.pi * np.arange(C) / C)
    W = roots[Q]
    ns = f.scale.norm()
    kappa = float(Fraction(ns.denominator ** 2, ns.numerator ** 2)
                  * Fraction(1, C ** (2 * field.degree) * field.discriminant))
    out = kappa * (W @ f.values)
    new_scale = (f.scale * field.elt(C) * field.different_generator).inverse()
    return ComplexSchwartz(field, new_scale, C, out)


def preimage(psi: IndFunction, lam_P: int = 200_000, B=2e4,
             precision: int = 64):
    """A Schwartz-Bruhat preimage of psi under the horospherical map:
    built from its Fourier transform Lambda^-1 sum_u chi'(u) s_psibar(u v),
    u over ray class representatives.  If psi is in the kernel of the
    projector the result is trace-zero."""
    data = psi.data
    rc = data.rc
    group = psi.group
    field = group.field
    N = group.N
    lam = lambda_constant(rc, data.chi_prime, data.m, lam_P)
    if abs(lam) < 1e-12:
        raise HorosphericalError(
            "Lambda_N vanished numerically; the Euler product must be nonzero")
    base = s_psi_bar(psi)
    total = np.zeros(base.grid.n, dtype=np.complex128)
    plus = tuple([1] * rc.sign_count)
    for (residue, signs) in _class_representatives(rc):
        # chi'_f sees only the finite part of the representative idele
        fin_coords = rc._rep_map[(residue, plus)]
        chi_val = cmath.exp(2j * cmath.pi * float(data.chi_prime.exponent_at(fin_coords)))
        # scale the argument: s_psibar(u v) with u acting by its residue
        perm = _residue_permutation(base, residue)
        total += chi_val * base.values[perm]
    total /= lam
    fhat = ComplexSchwartz(field, field.one, N, total)
    # invert: the transform is self-inverse on this family
    phi_c = complex_fourier_transform(fhat)
    return PreimageFunction(phi_c, fhat, data)


@dataclass
class PreimageFunction:
    """Preimage data: the function, its transform, and the Hecke data."""

    function: ComplexSchwartz
    transform: ComplexSchwartz
    data: HeckeCharacterData

    def is_trace_zero(self, tol: float = 1e-10) -> bool:
        v0 = self.function.values[0]
        return abs(v0) < tol and abs(self.function.values.sum()) < tol


def _residue_permutation(f, residue):
    """Index permutation idx(v) -> idx(residue * v) on the table grid."""
    from .classfield import ResidueRing

    ring = ResidueRing(f.field, f.C)
    g = f.grid
    C = f.C
    n = g.n
    perm = np.zeros(n, dtype=np.int64)
    for idx in range(n):
        (a1, b1), (a2, b2) = g.coords_of(idx)
        w1 = ring.mul(residue, (a1, b1))
        w2 = ring.mul(residue, (a2, b2))
        if f.xi == 1:
            perm[idx] = (w1[0] % C) * C + (w2[0] % C)
        else:
            perm[idx] = ((w1[0] * C + w1[1]) * C + w2[0]) * C + w2[1]
    return perm


def horospherical_map_complex(phi: "PreimageFunction | ComplexSchwartz", m: int,
                              rc: RayClassGroup, mats, B=2e4,
                              precision: int = 64) -> list[complex]:
    """rho on the complex-table family (the preimage path)."""
    if isinstance(phi, PreimageFunction):
        fhat = phi.transform
        eta = phi.data.eta
    else:
        fhat = complex_fourier_transform(phi)
        eta = None
    field = fhat.field
    k = m + 2
    C = fhat.C
    group = matrix_group(field.degree, field.D, rc.N)
    Z = _line_sums(field, rc.N, C, k, B, precision)
    cN = _unfold_constant(field, rc, m)
    sprime_nk = float(fhat.scale.norm()) ** k if field.degree == 2 \
        else float(fhat.scale.a) ** k
    ring = ResidueRing(field, C)
    tbl = fhat.values
    out = []
    plus = tuple([1] * rc.sign_count)
    for mat in mats:
        lifted = _lift_matrix(mat, rc.N, C)
        w0 = group.hat_inverse_column(lifted, ring)
        acc = 0j
        if field.degree == 1:
            for lam in range(C):
                idx = (lam * w0[0][0] % C) * C + (lam * w0[1][0] % C)
                v = tbl[idx]
                if v:
                    acc += v * Z[lam]
        else:
            for la in range(C):
                for lb in range(C):
                    i1 = ring.mul((la, lb), w0[0])
                    i2 = ring.mul((la, lb), w0[1])
                    idx = ((i1[0] * C + i1[1]) * C + i2[0]) * C + i2[1]
                    v = tbl[idx]
                    if v:
                        acc += v * Z[la * C + lb]
        val = cN * acc / sprime_nk
        if eta is not None:
            det = group.det(mat)
            val *= cmath.exp(2j * cmath.pi * float(eta.exponent_at(rc._rep_map[(det, plus)])))
        out.append(complex(val))
    return out


# ---------------------------------------------------------------------------
# spherical family census (the boundary codimension count)


def spherical_family_count(rc: RayClassGroup) -> int:
    """Number of distinct character families (eta, chi' trivial, m = 0) whose
    restriction to the norm-one torus is the square norm: one per eta."""
    seen = set()
    for eta in all_characters(rc.group):
        trivial = GroupCharacter(rc.group, tuple(Fraction(0) for _ in rc.group.invariants))
        data = HeckeCharacterData(rc, eta, trivial, 0)
        # canonicalize on the phi~_f values over the group
        key = tuple(
            data.phi_tilde_exponent(c, rc.group.zero()) for c in rc.group.all_coords()
        ) + tuple(
            data.phi_tilde_exponent(rc.group.zero(), c) for c in rc.group.all_coords()
        )
        seen.add(key)
    return len(seen)
