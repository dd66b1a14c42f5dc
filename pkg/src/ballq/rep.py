"""The 3x3 matrix model of the lattice: generators, projective equality, ball action, mirrors.

Group elements are stored in "primed" coordinates g' = gamma0^-1 g gamma0, where every
element has entries in Z[zeta]; this keeps all products in exact integer arithmetic.
The matrix g itself is unitary for F = diag(1, 1, 1 - r) and acts on the unit ball.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cyclo import CycNum, FIELDS, ONE, R, ZERO, ZETA, _mul_coeffs, _zeta_times
from .fpgrp import words as W

# ---------------------------------------------------------------------------
# integer matrices over Z[zeta]: tuples of 9 coefficient 4-tuples, row-major

Z0 = (0, 0, 0, 0)
Z1 = (1, 0, 0, 0)


def _add4(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def imul(A: tuple, B: tuple) -> tuple:
    out = []
    for i in range(3):
        a0, a1, a2 = A[3 * i], A[3 * i + 1], A[3 * i + 2]
        for j in range(3):
            acc = [0, 0, 0, 0]
            for a, b in ((a0, B[j]), (a1, B[3 + j]), (a2, B[6 + j])):
                if a == Z0 or b == Z0:
                    continue
                p = _mul_coeffs(a, b)
                acc[0] += p[0]
                acc[1] += p[1]
                acc[2] += p[2]
                acc[3] += p[3]
            out.append(tuple(acc))
    return tuple(out)


def imatvec(A: tuple, v: Sequence) -> tuple:
    return tuple(
        _add4(_add4(_mul_coeffs(A[3 * i], v[0]), _mul_coeffs(A[3 * i + 1], v[1])), _mul_coeffs(A[3 * i + 2], v[2]))
        for i in range(3)
    )


def _zeta_scale(A: tuple) -> tuple:
    return tuple(_zeta_times(a) for a in A)


def icanonical(A: tuple) -> tuple:
    """Lexicographically least of the 12 scalar multiples zeta^k * A (entries read row-major)."""
    best = A
    cur = A
    for _ in range(11):
        cur = _zeta_scale(cur)
        if cur < best:
            best = cur
    return best


IDENTITY_INT = (Z1, Z0, Z0, Z0, Z1, Z0, Z0, Z0, Z1)


def _cyc_to_int(x: CycNum) -> tuple:
    return x.int_coeffs()


def _int_to_cyc(a: Sequence[int]) -> CycNum:
    return CycNum._raw(a)


# ---------------------------------------------------------------------------
# exact 3x3 matrices over Q(zeta)


class Mat3:
    """A 3x3 matrix with CycNum entries."""

    __slots__ = ("e",)

    def __init__(self, entries: Iterable):
        e = tuple(CycNum.coerce(x) if not isinstance(x, CycNum) else x for x in entries)
        if len(e) != 9:
            raise ValueError("Mat3 needs 9 entries")
        self.e = e

    @classmethod
    def rows(cls, rows: Sequence[Sequence]) -> Mat3:
        return cls([x for row in rows for x in row])

    @classmethod
    def diag(cls, a, b, c) -> Mat3:
        return cls([a, 0, 0, 0, b, 0, 0, 0, c])

    @classmethod
    def identity(cls) -> Mat3:
        return cls.diag(1, 1, 1)

    def __getitem__(self, ij) -> CycNum:
        i, j = ij
        return self.e[3 * i + j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat3) and self.e == other.e

    def __hash__(self) -> int:
        return hash(self.e)

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(str(self[i, j]) for j in range(3)) + "]" for i in range(3)]
        return "Mat3(" + ", ".join(rows) + ")"

    def __mul__(self, other):
        if isinstance(other, Mat3):
            e = []
            for i in range(3):
                for j in range(3):
                    e.append(self[i, 0] * other[0, j] + self[i, 1] * other[1, j] + self[i, 2] * other[2, j])
            return Mat3(e)
        if isinstance(other, (tuple, list)):
            return tuple(self[i, 0] * other[0] + self[i, 1] * other[1] + self[i, 2] * other[2] for i in range(3))
        return Mat3([x * other for x in self.e])

    __rmul__ = lambda self, other: Mat3([other * x for x in self.e])

    def adjoint(self) -> Mat3:
        """Conjugate transpose."""
        return Mat3([self[j, i].conj() for i in range(3) for j in range(3)])

    def det(self) -> CycNum:
        a = self
        return (
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )

    def cofactor_adjugate(self) -> Mat3:
        a = self
        c = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [x for x in range(3) if x != i]
                s = [y for y in range(3) if y != j]
                minor = a[r[0], s[0]] * a[r[1], s[1]] - a[r[0], s[1]] * a[r[1], s[0]]
                c[j][i] = minor if (i + j) % 2 == 0 else -minor
        return Mat3.rows(c)

    def inverse(self) -> Mat3:
        d = self.det()
        return self.cofactor_adjugate() * d.inverse()

    def to_int(self) -> tuple:
        return tuple(_cyc_to_int(x) for x in self.e)

    @classmethod
    def from_int(cls, A: tuple) -> Mat3:
        return cls([_int_to_cyc(a) for a in A])

    def to_complex(self) -> np.ndarray:
        return np.array([[self[i, j].embed() for j in range(3)] for i in range(3)])

    def is_scalar(self) -> bool:
        e = self.e
        return all(e[k] == ZERO for k in (1, 2, 3, 5, 6, 7)) and e[0] == e[4] == e[8]


# ---------------------------------------------------------------------------
# Hermitian forms and the fixed change of basis

z = ZETA
R1 = R - ONE  # r - 1
F = Mat3.diag(1, 1, ONE - R)
F_PRIME = Mat3.rows([[R + 1, -1, 0], [-1, R - 1, 0], [0, 0, -1]])
GAMMA0 = Mat3.rows([[1, 0, 0], [1, ONE - R, 0], [0, 0, 1]])
GAMMA0_INV = GAMMA0.inverse()
KAPPA = math.sqrt(math.sqrt(3.0) - 1.0)  # sqrt(r - 1)

U_PRIME = Mat3.rows([[z**3 + z**2 - z, 1 - z, 0], [z**3 + z**2 - 1, z - z**3, 0], [0, 0, 1]])
V_PRIME = Mat3.rows([[z**3, 0, 0], [z**3 + z**2 - z - 1, 1, 0], [0, 0, 1]])
B_PRIME = Mat3.rows(
    [
        [1, 0, 0],
        [-2 * z**3 - z**2 + 2 * z + 2, z**3 + z**2 - z - 1, -(z**3) - z**2],
        [z**2 + z, -(z**3) - 1, -(z**3) + z + 1],
    ]
)


def herm(x: Sequence[CycNum], y: Sequence[CycNum], form: Mat3 = F) -> CycNum:
    """<x, y> = x^* form y."""
    fy = form * tuple(y)
    return sum((xi.conj() * yi for xi, yi in zip(x, fy)), ZERO)


# ---------------------------------------------------------------------------
# projective group elements


class ProjElement:
    """An element of the lattice modulo the 12 scalars zeta^k I.

    ``p`` is the canonical integer matrix in primed coordinates; ``word`` optionally
    records a generating word (signed letters over u, v, b).
    """

    __slots__ = ("p", "word", "_mat")

    def __init__(self, p: tuple, word: tuple | None = None, canonical: bool = False):
        self.p = p if canonical else icanonical(p)
        self.word = word
        self._mat = None

    @classmethod
    def from_primed(cls, m: Mat3, word=None, check: bool = True) -> ProjElement:
        if check and m.adjoint() * F_PRIME * m != F_PRIME:
            raise ValueError("matrix is not unitary for F'")
        return cls(m.to_int(), word)

    @classmethod
    def from_matrix(cls, g: Mat3, word=None, check: bool = True) -> ProjElement:
        if check and g.adjoint() * F * g != F:
            raise ValueError("matrix is not unitary for F")
        return cls.from_primed(GAMMA0_INV * g * GAMMA0, word, check=False)

    @property
    def key(self) -> tuple:
        return self.p

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjElement) and self.p == other.p

    def __hash__(self) -> int:
        return hash(self.p)

    def __mul__(self, other: ProjElement) -> ProjElement:
        w = None
        if self.word is not None and other.word is not None:
            w = W.free_reduce(self.word + other.word)
        return ProjElement(imul(self.p, other.p), w)

    def inverse(self) -> ProjElement:
        m = Mat3.from_int(self.p)
        d = m.det()
        inv = m.cofactor_adjugate() * d.conj()  # det is a root of unity
        w = W.inverse(self.word) if self.word is not None else None
        return ProjElement(inv.to_int(), w)

    def __pow__(self, n: int) -> ProjElement:
        if n < 0:
            return self.inverse() ** (-n)
        result = IDENTITY
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.p == IDENTITY.p

    def primed(self) -> Mat3:
        return Mat3.from_int(self.p)

    def matrix(self) -> Mat3:
        """The F-unitary representative gamma0 g' gamma0^-1 (one of the 12 scalar multiples)."""
        if self._mat is None:
            self._mat = GAMMA0 * self.primed() * GAMMA0_INV
        return self._mat

    def complex_matrix(self) -> np.ndarray:
        return self.matrix().to_complex()

    def conjugate_by(self, h: ProjElement) -> ProjElement:
        """h g h^-1."""
        return h * self * h.inverse()

    def reduce(self, p: int) -> tuple:
        """Entries of g' reduced to F_4 (p=2) or F_9 (p=3), as field codes."""
        ft = FIELDS[p]
        return tuple(ft.reduce_int_coeffs(a) for a in self.p)

    def __repr__(self) -> str:
        return f"ProjElement(word={self.word})"


IDENTITY = ProjElement(IDENTITY_INT, (), canonical=False)

GEN_NAMES = ("u", "v", "b")
_U = ProjElement.from_primed(U_PRIME, (1,))
_V = ProjElement.from_primed(V_PRIME, (2,))
_B = ProjElement.from_primed(B_PRIME, (3,))
J_WORD = (1, 2, 1, 2)  # j = (uv)^2
ALPHABET = {"u": (1,), "v": (2,), "b": (3,), "j": J_WORD}


def parse_word(text: str) -> tuple:
    """Parse a word over u, v, b and j = (uv)^2 into signed letters over u, v, b."""
    return W.parse(text, ALPHABET)


_GEN_INT = {1: _U.p, 2: _V.p, 3: _B.p}
_GEN_INT.update({-k: _B.p for k in ()})


def _inverse_int(A: tuple) -> tuple:
    m = Mat3.from_int(A)
    return (m.cofactor_adjugate() * m.det().conj()).to_int()


for _k in (1, 2, 3):
    _GEN_INT[-_k] = _inverse_int(_GEN_INT[_k])


def word_to_matrix(w) -> ProjElement:
    """Product of generator matrices along a word (string or signed letters), canonicalized."""
    if isinstance(w, str):
        w = parse_word(w)
    w = tuple(w)
    acc = IDENTITY_INT
    for x in w:
        acc = imul(acc, _GEN_INT[x])
    return ProjElement(acc, w)


def generators() -> dict:
    """The named elements u, v, b and j = (uv)^2, with unitarity asserted."""
    gens = {"u": _U, "v": _V, "b": _B, "j": word_to_matrix(J_WORD)}
    for name, g in gens.items():
        m = g.matrix()
        if m.adjoint() * F * m != F:
            raise AssertionError(f"generator {name} is not F-unitary")
    return gens


def element_order(g: ProjElement, bound: int = 24):
    """Least n <= bound with g^n trivial, or None if the order exceeds the bound."""
    if bound < 1:
        raise ValueError("bound must be positive")
    acc = g.p
    for n in range(1, bound + 1):
        if icanonical(acc) == IDENTITY.p:
            return n
        acc = imul(acc, g.p)
    return None


def char_poly_invariant(g: ProjElement) -> tuple:
    """Characteristic polynomial of g' up to the 12 scalar rescalings.

    For lambda * g the coefficients (trace, second symmetric function, det) scale by
    (lambda, lambda^2, lambda^3); the invariant is the least such triple.
    """
    m = g.primed()
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    s2 = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = m.det()
    best = None
    for k in range(12):
        lam = CycNum.zeta(k)
        cand = ((lam * tr).c, (lam * lam * s2).c, (lam**3 * det).c)
        if best is None or cand < best:
            best = cand
    return best


# ---------------------------------------------------------------------------
# points of the ball


def _normalize_vector(v: Sequence[CycNum]) -> tuple:
    """Scale a projective vector so its last nonzero coordinate is 1."""
    for x in reversed(v):
        if x:
            inv = x.inverse()
            return tuple(y * inv for y in v)
    raise ValueError("zero vector")


@dataclass(frozen=True)
class BallPoint:
    """A point (z, w) of the unit ball, optionally with an exact homogeneous vector (kz, kw, 1)."""

    z: complex
    w: complex
    exact: tuple | None = None

    @classmethod
    def from_vector(cls, v: Sequence[CycNum]) -> BallPoint:
        v = _normalize_vector(v)
        if v[2] != ONE:
            raise ValueError("vector is not of ball type")
        num = herm(v, v).embed().real
        if num >= 0:
            raise ValueError("vector is not F-negative")
        return cls(v[0].embed() / KAPPA, v[1].embed() / KAPPA, v)

    @classmethod
    def from_complex(cls, x: Sequence[complex]) -> BallPoint:
        x = np.asarray(x, dtype=complex)
        return cls(complex(x[0] / x[2] / KAPPA), complex(x[1] / x[2] / KAPPA), None)

    def homogeneous(self) -> np.ndarray:
        return np.array([KAPPA * self.z, KAPPA * self.w, 1.0 + 0j])

    def close_to(self, other: BallPoint, tol: float = 1e-9) -> bool:
        return abs(self.z - other.z) < tol and abs(self.w - other.w) < tol


ORIGIN = BallPoint.from_vector((ZERO, ZERO, ONE))
C_PARAM = z**2 - z  # c = (r - 1)(z^3 - 1)/2
POINT_P = BallPoint.from_vector((C_PARAM * (z - 1), z - 1, ONE))


def ball_action(g: ProjElement, x: BallPoint) -> BallPoint:
    if x.exact is not None:
        return BallPoint.from_vector(g.matrix() * tuple(x.exact))
    y = g.complex_matrix() @ x.homogeneous()
    if abs(y[2]) < 1e-300:
        raise ValueError("point is not in the ball")
    return BallPoint.from_complex(y)


def fixed_point(g: ProjElement) -> BallPoint:
    """The fixed point in the ball of an elliptic element, from its negative-type eigenvector."""
    m = g.complex_matrix()
    vals, vecs = np.linalg.eig(m)
    Fc = F.to_complex()
    best = None
    for k in range(3):
        v = vecs[:, k]
        nrm = float(np.real(np.conj(v) @ Fc @ v)) / float(np.real(np.conj(v) @ v))
        if best is None or nrm < best[0]:
            best = (nrm, v)
    if best[0] >= 0:
        raise ValueError("element has no fixed point in the ball")
    return BallPoint.from_complex(best[1])


def point_q() -> BallPoint:
    """The fixed point of buv, from its negative-type eigenvector."""
    return fixed_point(word_to_matrix("buv"))


def point_q_formula() -> BallPoint:
    """The same point from the closed form in lambda = exp(-i pi / 18)."""
    lam = cmath.exp(-1j * cmath.pi / 18)
    zc = cmath.exp(1j * cmath.pi / 6)
    c1 = zc**3 - zc**2 - zc + 1 + (zc**2 - zc + 1) * lam + (-(zc**3) + zc**2 - 1) * lam**2
    c2 = zc**3 - (zc - 1) * lam**2
    return BallPoint(c1 / KAPPA, c2 / KAPPA, None)


def is_fixed(g: ProjElement, x: BallPoint, tol: float = 1e-9) -> bool:
    if x.exact is not None:
        y = g.matrix() * tuple(x.exact)
        v = x.exact
        # projective equality: all 2x2 minors vanish
        return all(y[i] * v[k] - y[k] * v[i] == ZERO for i in range(3) for k in range(i + 1, 3))
    return ball_action(g, x).close_to(x, tol)


def exact_key(v: Sequence[CycNum]) -> tuple:
    return tuple(x.c for x in _normalize_vector(v))


# ---------------------------------------------------------------------------
# mirrors


@dataclass(frozen=True)
class Mirror:
    """The mirror {x : x^* F p = 0} of an F-positive polar vector p, scaled so its first nonzero entry is 1."""

    polar: tuple

    @classmethod
    def from_polar(cls, p: Sequence[CycNum]) -> Mirror:
        p = tuple(CycNum.coerce(x) for x in p)
        for x in p:
            if x:
                inv = x.inverse()
                p = tuple(y * inv for y in p)
                break
        else:
            raise ValueError("zero polar vector")
        if herm(p, p).embed().real <= 0:
            raise ValueError("polar vector must be F-positive")
        return cls(p)

    @classmethod
    def slope(cls, alpha) -> Mirror:
        """M_alpha = {z = alpha w}; alpha=None gives M_infinity = {w = 0}."""
        if alpha is None:
            return cls.from_polar((ZERO, ONE, ZERO))
        alpha = CycNum.coerce(alpha)
        return cls.from_polar((ONE, -alpha.conj(), ZERO))

    def contains(self, x: BallPoint, tol: float = 1e-9) -> bool:
        if x.exact is not None:
            return point_on_mirror(x, self)
        p = np.array([c.embed() for c in self.polar])
        v = x.homogeneous()
        val = np.conj(v) @ (F.to_complex() @ p)
        return abs(val) < tol

    def sample_points(self, n: int, rng: np.random.Generator) -> list:
        """Random ball points on the mirror (floating point)."""
        p = np.array([c.embed() for c in self.polar])
        Fc = F.to_complex()
        fp = Fc @ p
        # basis of the orthogonal complement {v : v^* F p = 0}, i.e. conj(fp) . v = 0
        null = np.linalg.svd(np.conj(fp)[None, :])[2][1:].conj()
        pts = []
        while len(pts) < n:
            coeffs = rng.normal(size=2) + 1j * rng.normal(size=2)
            v = null.T @ coeffs
            val = np.real(np.conj(v) @ Fc @ v)
            if val < 0 and abs(v[2]) > 1e-12:
                pts.append(BallPoint.from_complex(v))
        return pts


def mirror_map(g: ProjElement, m: Mirror) -> Mirror:
    return Mirror.from_polar(g.matrix() * tuple(m.polar))


def point_on_mirror(x: BallPoint, m: Mirror) -> bool:
    if x.exact is None:
        raise ValueError("exact incidence needs an exact vector")
    return herm(x.exact, m.polar) == ZERO


def _reflection_row(g: ProjElement):
    """A nonzero row spanning the rows of g - lambda I when that matrix has rank one, else None."""
    m = g.matrix()
    for k in range(12):
        lam = CycNum.zeta(k)
        a = [m.e[i] - (lam if i in (0, 4, 8) else ZERO) for i in range(9)]
        rows = [tuple(a[3 * i : 3 * i + 3]) for i in range(3)]
        nz = [r for r in rows if any(r)]
        if not nz:
            continue
        r0 = nz[0]
        if all(r[i] * r0[j] == r[j] * r0[i] for r in nz for i in range(3) for j in range(i + 1, 3)):
            return r0
    return None


def is_reflection(g: ProjElement) -> bool:
    """True for a complex reflection: a nontrivial element with a 2-dimensional eigenspace."""
    return not g.is_identity() and _reflection_row(g) is not None


def reflection_mirror(g: ProjElement) -> Mirror:
    """Mirror of a complex reflection g: its pointwise fixed set, as the kernel of g - lambda I."""
    row = _reflection_row(g) if not g.is_identity() else None
    if row is None:
        raise ValueError("element is not a complex reflection")
    # {x : row . x = 0} = {x : x^* F p = 0} with F p = conj(row)
    finv = F.inverse()
    return Mirror.from_polar(finv * tuple(c.conj() for c in row))


def mirror_intersection(m1: Mirror, m2: Mirror) -> BallPoint:
    """The common point of two mirrors meeting in the ball: the F-orthogonal complement of both polars."""
    fp = [F * tuple(m.polar) for m in (m1, m2)]
    x = [tuple(c.conj() for c in v) for v in fp]
    a, b = x
    v = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    return BallPoint.from_vector(v)


# ---------------------------------------------------------------------------
# differential at a fixed point


def jacobian_displayed(g: ProjElement, x: BallPoint) -> np.ndarray:
    """The 2x2 differential of g at x as given by the closed-form expression in terms of conj(g_ij)."""
    gm = g.complex_matrix()
    z1, z2 = x.z, x.w
    k = KAPPA
    r1 = math.sqrt(3.0) - 1.0
    zeta2 = cmath.exp(1j * cmath.pi / 3)
    den = (gm[2, 0] * k * z1 + gm[2, 1] * k * z2 + gm[2, 2]) ** 2
    c = np.conj(gm)
    mat = np.array(
        [
            [k * z2 * c[1, 2] + r1 * c[1, 1], -(k * z2 * c[0, 2] + r1 * c[0, 1])],
            [-(k * z1 * c[1, 2] + r1 * c[1, 0]), k * z1 * c[0, 2] + r1 * c[0, 0]],
        ]
    )
    return (zeta2 / r1) / den * mat


def jacobian_numeric(g: ProjElement, x: BallPoint, h: float = 1e-6) -> np.ndarray:
    """Derivative of the holomorphic ball map by central differences (oracle for the closed form)."""
    gm = g.complex_matrix()

    def f(z1, z2):
        y = gm @ np.array([KAPPA * z1, KAPPA * z2, 1.0])
        return np.array([y[0] / y[2] / KAPPA, y[1] / y[2] / KAPPA])

    d1 = (f(x.z + h, x.w) - f(x.z - h, x.w)) / (2 * h)
    d2 = (f(x.z, x.w + h) - f(x.z, x.w - h)) / (2 * h)
    # same layout as the displayed matrix: rows are d/dz1, d/dz2
    return np.array([d1, d2])


def jacobian_eigenvalues(g: ProjElement, x: BallPoint, tol: float = 1e-9) -> tuple:
    if not is_fixed(g, x, tol=1e-7):
        raise ValueError("point is not fixed by the element")
    vals = np.linalg.eigvals(jacobian_displayed(g, x))
    return tuple(sorted((complex(v) for v in vals), key=lambda c: (round(cmath.phase(c), 9), c.real)))


OMEGA_C = cmath.exp(2j * cmath.pi / 3)


def matches_up_to_unit(pair: Sequence[complex], target: Sequence[complex], tol: float = 1e-9) -> bool:
    """True if s*{pair} = {target} as multisets for some complex s with |s| = 1."""
    l1, l2 = pair
    for t1, t2 in (target, tuple(reversed(target))):
        s = t1 / l1
        if abs(abs(s) - 1) < tol and abs(s * l2 - t2) < tol:
            return True
    return False


def fixed_point_type(pair: Sequence[complex], tol: float = 1e-9) -> str | None:
    """'1,1' for {w, w}, '1,2' for {w, w^2}, both up to a common unit scalar; None otherwise."""
    if matches_up_to_unit(pair, (OMEGA_C, OMEGA_C), tol):
        return "1,1"
    if matches_up_to_unit(pair, (OMEGA_C, OMEGA_C**2), tol):
        return "1,2"
    return None
